#pragma once

#include <vector>

#include "numbers.hpp"

namespace heckeops {

// Element of Z_p[[h]] truncated at h^L. Coefficients are exact rationals; they
// are only reduced mod p^M when comparing or printing, so intermediate
// arithmetic is never rounded. Truncation at h^L is a ring quotient
// (multiplication cannot lower h-degree), hence ring identities computed
// inside a fixed truncation hold exactly.
class HSeries {
 public:
  struct Params {
    Int p;
    int L;  // coefficients stored for h^0 .. h^{L-1}
    int M;  // coefficients meaningful mod p^M
  };

  HSeries() : p_(0), L_(0), M_(0) {}
  HSeries(Params params, std::vector<Rat> coeffs);

  static HSeries zero(const Params& params) { return HSeries(params, {}); }
  static HSeries constant(const Params& params, const Rat& c) { return HSeries(params, {c}); }
  static HSeries h(const Params& params) { return HSeries(params, {Rat(0), Rat(1)}); }
  // h^e with coefficient c.
  static HSeries monomial(const Params& params, int e, const Rat& c);

  const Int& p() const { return p_; }
  int L() const { return L_; }
  int M() const { return M_; }
  Params params() const { return Params{p_, L_, M_}; }

  bool is_zero() const { return c_.empty(); }
  // Highest stored exponent with a nonzero coefficient; -1 for the zero series.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rat coeff(int e) const;
  const std::vector<Rat>& coeffs() const { return c_; }

  bool p_integral() const;
  // Unit of Z_p[[h]]: constant coefficient has p-adic valuation 0.
  bool is_unit() const;

  HSeries operator-() const;
  HSeries operator+(const HSeries& o) const;
  HSeries operator-(const HSeries& o) const;
  HSeries operator*(const HSeries& o) const;
  HSeries operator*(const Rat& s) const;
  HSeries pow(long e) const;
  // Multiplicative inverse up to truncation; requires a unit.
  HSeries invert() const;

  // Same value reinterpreted at another truncation. Raising L treats the
  // stored coefficients as a polynomial representative; lowering L truncates.
  HSeries with_truncation(int L) const;
  HSeries with_pprec(int M) const;
  // Canonical p-integral representative mod p^M (errors on p in denominators).
  HSeries reduced_mod_pM() const;
  // Same, but mod an explicit power p^k (used to keep long internal
  // computations small while retaining guard digits above M).
  HSeries reduced_mod_p_power(int k) const;

  // Coefficientwise congruence mod p^min(M): the difference must vanish mod
  // p^M (p in a denominator of the difference means "not congruent").
  bool congruent(const HSeries& o) const;
  // Exact equality of stored rationals (same trimmed coefficient lists).
  bool equals_exact(const HSeries& o) const;

  // All coefficients divisible by p^k (exact rational valuation check).
  bool divisible_by_p_power(int k) const;
  // Exact division by p^k; errors if any coefficient would leave Z_p.
  HSeries div_by_p_power(int k) const;

  std::string to_string() const;

 private:
  void trim();
  static Params reconcile(const HSeries& a, const HSeries& b);

  Int p_;
  int L_;
  int M_;
  std::vector<Rat> c_;
};

inline HSeries operator*(const Rat& s, const HSeries& x) { return x * s; }

// log(u^{q-1})/(q-1) with q = p^d, the p-adic logarithm extended to all units
// by killing torsion (roots of unity map to 0). Requires p odd; the p = 2
// variant needs a squaring-first contraction and is deliberately not
// certified here.
HSeries iwasawa_log(const HSeries& u, int residue_degree);

// log(y) for y congruent to 1 mod (p, h); plain alternating series.
HSeries log_one_unit(const HSeries& y);

}  // namespace heckeops

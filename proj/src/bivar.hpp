#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "numbers.hpp"

namespace heckeops {

// Sparse polynomial in two formal variables A, B with exact rational
// coefficients. Used for curve coefficients, Hasse invariants and the
// numerator data of modular-form elements.
class BiPoly {
 public:
  using Key = std::pair<int, int>;  // (A-degree, B-degree)

  BiPoly() = default;

  static BiPoly constant(const Rat& c) { return monomial(0, 0, c); }
  static BiPoly A() { return monomial(1, 0, 1); }
  static BiPoly B() { return monomial(0, 1, 1); }
  static BiPoly monomial(int da, int db, const Rat& c);

  bool is_zero() const { return t_.empty(); }
  const std::map<Key, Rat>& terms() const { return t_; }
  Rat coeff(int da, int db) const;

  BiPoly operator-() const;
  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly scale(const Rat& s) const;
  BiPoly pow(int e) const;

  bool operator==(const BiPoly& o) const { return t_ == o.t_; }
  bool operator!=(const BiPoly& o) const { return t_ != o.t_; }

  Rat eval(const Rat& a, const Rat& b) const;
  // Partial evaluation B = b; coefficients of A^0, A^1, ... (dense).
  std::vector<Rat> eval_b(const Rat& b) const;

  // Coefficients must be integers; reduces each into [0, p).
  BiPoly reduced_mod(const Int& p) const;

  // True when every monomial has the same weight da*wa + db*wb; the common
  // weight is reported through `weight` when non-null (zero polynomial counts
  // as homogeneous of unspecified weight).
  bool weighted_homogeneous(long wa, long wb, long* weight = nullptr) const;

  // Largest k with B^k dividing every monomial (0 for the zero polynomial).
  int b_divisibility() const;
  // Exact division by B^k.
  BiPoly div_b_power(int k) const;

  std::string to_string(const std::string& va = "A", const std::string& vb = "B") const;

 private:
  void prune();
  std::map<Key, Rat> t_;
};

}  // namespace heckeops

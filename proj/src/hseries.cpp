#include "hseries.hpp"

#include <algorithm>
#include <sstream>

namespace heckeops {

HSeries::HSeries(Params params, std::vector<Rat> coeffs)
    : p_(params.p), L_(params.L), M_(params.M), c_(std::move(coeffs)) {
  if (p_ < 2) fail(ErrorCode::invalid_argument, "prime must be >= 2");
  if (L_ < 1 || M_ < 1) fail(ErrorCode::invalid_argument, "truncation orders must be >= 1");
  if (static_cast<int>(c_.size()) > L_) c_.resize(L_);
  trim();
}

HSeries HSeries::monomial(const Params& params, int e, const Rat& c) {
  if (e < 0) fail(ErrorCode::invalid_argument, "negative h-exponent");
  std::vector<Rat> v;
  if (e < params.L && c != 0) {
    v.resize(e + 1);
    v[e] = c;
  }
  return HSeries(params, std::move(v));
}

Rat HSeries::coeff(int e) const {
  if (e < 0 || e >= static_cast<int>(c_.size())) return Rat(0);
  return c_[e];
}

bool HSeries::p_integral() const {
  for (const Rat& c : c_)
    if (!is_p_integral(c, p_)) return false;
  return true;
}

bool HSeries::is_unit() const {
  if (c_.empty()) return false;
  const Rat& c0 = c_[0];
  return c0 != 0 && is_p_integral(c0, p_) && vp(c0, p_) == 0;
}

void HSeries::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

HSeries::Params HSeries::reconcile(const HSeries& a, const HSeries& b) {
  if (a.p_ != b.p_) fail(ErrorCode::invalid_argument, "mixed primes in series arithmetic");
  return Params{a.p_, std::min(a.L_, b.L_), std::min(a.M_, b.M_)};
}

HSeries HSeries::operator-() const {
  std::vector<Rat> v(c_);
  for (Rat& c : v) c = -c;
  return HSeries(params(), std::move(v));
}

HSeries HSeries::operator+(const HSeries& o) const {
  Params pr = reconcile(*this, o);
  std::vector<Rat> v(std::max(c_.size(), o.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
  return HSeries(pr, std::move(v));
}

HSeries HSeries::operator-(const HSeries& o) const {
  Params pr = reconcile(*this, o);
  std::vector<Rat> v(std::max(c_.size(), o.c_.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = coeff(static_cast<int>(i)) - o.coeff(static_cast<int>(i));
  return HSeries(pr, std::move(v));
}

HSeries HSeries::operator*(const HSeries& o) const {
  Params pr = reconcile(*this, o);
  if (c_.empty() || o.c_.empty()) return zero(pr);
  // Iterate over effective degrees only, so sparse high-truncation values
  // multiply in time proportional to their actual support.
  const int na = static_cast<int>(c_.size());
  const int nb = static_cast<int>(o.c_.size());
  const int n = std::min(pr.L, na + nb - 1);
  std::vector<Rat> v(n);
  for (int i = 0; i < na; ++i) {
    if (c_[i] == 0) continue;
    const int jmax = std::min(nb, n - i);
    for (int j = 0; j < jmax; ++j) {
      if (o.c_[j] == 0) continue;
      v[i + j] += c_[i] * o.c_[j];
    }
  }
  return HSeries(pr, std::move(v));
}

HSeries HSeries::operator*(const Rat& s) const {
  if (s == 0) return zero(params());
  std::vector<Rat> v(c_);
  for (Rat& c : v) c *= s;
  return HSeries(params(), std::move(v));
}

HSeries HSeries::pow(long e) const {
  if (e < 0) fail(ErrorCode::invalid_argument, "negative series power; invert first");
  HSeries r = constant(params(), 1);
  HSeries b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

HSeries HSeries::invert() const {
  if (!is_unit()) {
    fail(ErrorCode::precision,
         c_.empty() ? "cannot invert zero series"
                    : "cannot invert non-unit: constant coefficient has positive p-valuation");
  }
  // Solve (sum a_i h^i)(sum b_i h^i) = 1 coefficient by coefficient.
  std::vector<Rat> b(L_);
  b[0] = Rat(1) / c_[0];
  for (int n = 1; n < L_; ++n) {
    Rat acc = 0;
    const int kmax = std::min(n, static_cast<int>(c_.size()) - 1);
    for (int k = 1; k <= kmax; ++k) acc += c_[k] * b[n - k];
    b[n] = -acc * b[0];
  }
  return HSeries(params(), std::move(b));
}

HSeries HSeries::with_truncation(int L) const {
  Params pr = params();
  pr.L = L;
  return HSeries(pr, c_);
}

HSeries HSeries::with_pprec(int M) const {
  Params pr = params();
  pr.M = M;
  return HSeries(pr, c_);
}

HSeries HSeries::reduced_mod_pM() const { return reduced_mod_p_power(M_); }

HSeries HSeries::reduced_mod_p_power(int k) const {
  const Int pk = pow_int(p_, static_cast<unsigned long>(k));
  std::vector<Rat> v(c_);
  for (Rat& c : v) {
    if (!is_p_integral(c, p_))
      fail(ErrorCode::precision, "coefficient with p in denominator cannot be reduced mod p^k");
    c = Rat(reduce_mod_pk(c, pk));
  }
  return HSeries(params(), std::move(v));
}

bool HSeries::congruent(const HSeries& o) const {
  HSeries d = *this - o;
  for (const Rat& c : d.c_) {
    if (c == 0) continue;
    if (!is_p_integral(c, d.p_)) return false;
    if (vp(c, d.p_) < d.M_) return false;
  }
  return true;
}

bool HSeries::equals_exact(const HSeries& o) const {
  if (p_ != o.p_) return false;
  return c_ == o.c_;
}

bool HSeries::divisible_by_p_power(int k) const {
  for (const Rat& c : c_) {
    if (c == 0) continue;
    if (!is_p_integral(c, p_) || vp(c, p_) < k) return false;
  }
  return true;
}

HSeries HSeries::div_by_p_power(int k) const {
  if (!divisible_by_p_power(k))
    fail(ErrorCode::precision, "division by p^" + std::to_string(k) + " is not exact");
  const Rat f = Rat(1) / Rat(pow_int(p_, static_cast<unsigned long>(k)));
  return *this * f;
}

std::string HSeries::to_string() const {
  if (c_.empty()) return "0";
  const Int pk = pow_int(p_, static_cast<unsigned long>(M_));
  std::ostringstream out;
  bool first = true;
  for (int e = degree(); e >= 0; --e) {
    Rat c = c_[e];
    if (c == 0) continue;
    // Integers display as balanced representatives mod p^M; other rationals
    // (p-integral or not) keep their fraction form for readability.
    Rat shown = (den(c) == 1) ? Rat(reduce_mod_pk_symmetric(c, pk)) : c;
    if (shown == 0) continue;
    bool neg = shown < 0;
    Rat mag = neg ? -shown : shown;
    if (first) {
      if (neg) out << "-";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    std::ostringstream term;
    if (e == 0) {
      term << mag;
    } else {
      bool is_int = den(mag) == 1;
      if (is_int) {
        if (mag != 1) term << mag;
      } else {
        term << "(" << mag << ")*";
      }
      term << "h";
      if (e > 1) term << "^" << e;
    }
    out << term.str();
  }
  if (first) return "0";
  return out.str();
}

HSeries log_one_unit(const HSeries& y) {
  const HSeries::Params pr = y.params();
  HSeries z = y - HSeries::constant(pr, 1);
  // z must lie in the ideal (p, h): constant term divisible by p.
  if (!z.is_zero()) {
    Rat z0 = z.coeff(0);
    if (z0 != 0 && (!is_p_integral(z0, pr.p) || vp(z0, pr.p) < 1))
      fail(ErrorCode::precision, "log argument is not congruent to 1 mod (p, h)");
  }
  // z^n lies in (p,h)^n, so the h^j coefficient of z^n/n has p-valuation at
  // least n - j - v_p(n); summing past n = L + M + slack leaves nothing
  // visible at precision (p^M, h^L).
  int slack = 2;
  for (long t = pr.L + pr.M; t > 0; t /= static_cast<long>(pr.p)) ++slack;
  const int n_max = pr.L + pr.M + slack;
  HSeries acc = HSeries::zero(pr);
  HSeries zn = HSeries::constant(pr, 1);
  for (int n = 1; n <= n_max; ++n) {
    zn = zn * z;
    if (zn.is_zero()) break;
    const Rat sign = (n % 2 == 1) ? Rat(1) : Rat(-1);
    acc = acc + zn * (sign / Rat(n));
  }
  return acc;
}

HSeries iwasawa_log(const HSeries& u, int residue_degree) {
  if (u.p() == 2)
    fail(ErrorCode::unsupported,
         "p = 2 logarithm is not certified (u^{q-1} does not contract fast enough)");
  if (residue_degree < 1) fail(ErrorCode::invalid_argument, "residue degree must be >= 1");
  if (!u.is_unit())
    fail(ErrorCode::precision, "iwasawa_log requires a unit (constant coefficient of valuation 0)");
  // q - 1 = p^d - 1 is coprime to p, so dividing by it keeps coefficients
  // p-integral whenever the logarithm itself is.
  Int q1 = pow_int(u.p(), static_cast<unsigned long>(residue_degree)) - 1;
  HSeries y = u.pow(static_cast<long>(q1));
  HSeries l = log_one_unit(y);
  return l * (Rat(1) / Rat(q1));
}

}  // namespace heckeops

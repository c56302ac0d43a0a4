#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace heckeops {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

// Error taxonomy mirrored by the C API status codes.
enum class ErrorCode {
  invalid_argument,
  parse,
  model,
  precision,
  unsupported,
  verify,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline Int num(const Rat& r) { return numerator(r); }
inline Int den(const Rat& r) { return denominator(r); }

// p-adic valuation of a nonzero integer.
inline long vp_int(Int n, const Int& p) {
  if (n == 0) fail(ErrorCode::invalid_argument, "valuation of zero");
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// p-adic valuation of a nonzero rational (may be negative).
inline long vp(const Rat& r, const Int& p) {
  if (r == 0) fail(ErrorCode::invalid_argument, "valuation of zero");
  return vp_int(num(r), p) - vp_int(den(r), p);
}

inline bool is_p_integral(const Rat& r, const Int& p) { return den(r) % p != 0; }

inline Int pow_int(const Int& base, unsigned long e) {
  Int r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// x^e for rational x, integer e (negative allowed; x must be nonzero then).
inline Rat pow_rat(const Rat& x, long e) {
  if (e >= 0) {
    Rat r = 1, b = x;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
      if (k & 1) r *= b;
      b *= b;
      k >>= 1;
    }
    return r;
  }
  if (x == 0) fail(ErrorCode::invalid_argument, "negative power of zero");
  return pow_rat(Rat(1) / x, -e);
}

inline Int mod_positive(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Modular inverse; m need not be prime but gcd(a, m) must be 1.
inline Int mod_inverse(const Int& a, const Int& m) {
  Int g, x, y;
  Int old_r = mod_positive(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) fail(ErrorCode::invalid_argument, "element not invertible in Z/m");
  return mod_positive(old_s, m);
}

// Canonical representative of a p-integral rational in [0, p^M).
inline Int reduce_mod_pk(const Rat& r, const Int& pk) {
  const Int n = mod_positive(num(r), pk);
  const Int d = mod_positive(den(r), pk);
  if (d == 1) return n;
  return mod_positive(n * mod_inverse(d, pk), pk);
}

// Symmetric (balanced) representative in (-p^M/2, p^M/2].
inline Int reduce_mod_pk_symmetric(const Rat& r, const Int& pk) {
  Int x = reduce_mod_pk(r, pk);
  if (2 * x > pk) x -= pk;
  return x;
}

}  // namespace heckeops

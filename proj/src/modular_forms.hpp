#pragma once

#include <string>
#include <vector>

#include "bivar.hpp"
#include "hecke_log.hpp"

namespace heckeops {

// Element of the level-4 graded ring Z[1/4][A, B][Delta^{-1}]: a
// weighted-homogeneous numerator over a power of Delta = A^2 B^4 (A^2 - 16B),
// tagged with its weight (|A| = 1, |B| = 2, |Delta| = 12). The numerator must
// be homogeneous of weight `weight + 12 * delta_exp`.
class MFPoly {
 public:
  MFPoly(BiPoly numerator, int delta_exp, int weight);

  static MFPoly zero(int weight = 0);
  static MFPoly constant(const Rat& c);
  static MFPoly gen_A();
  static MFPoly gen_B();
  // The integral Hasse-invariant lift H = A^4 - 16 A^2 B + 26 B^2.
  static MFPoly hasse_lift();
  static MFPoly discriminant();
  static MFPoly discriminant_inverse();

  const BiPoly& numerator() const { return num_; }
  int delta_exp() const { return e_; }
  int weight() const { return k_; }
  bool is_zero() const { return num_.is_zero(); }

  MFPoly operator-() const;
  // Addition requires equal weights; denominators are brought to a common
  // Delta power.
  MFPoly operator+(const MFPoly& o) const;
  MFPoly operator-(const MFPoly& o) const;
  MFPoly operator*(const MFPoly& o) const;
  MFPoly scale(const Rat& s) const;
  MFPoly pow(int e) const;

  // Equality as ring elements (cross-multiplied by Delta powers).
  bool operator==(const MFPoly& o) const;
  bool operator!=(const MFPoly& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  BiPoly num_;
  int e_ = 0;
  int k_ = 0;
};

// Image of a modular-form element in the degree-4 extension
// E0[a]/(a^4 - 16 a^2 + 26 - h) of the base series ring, together with a
// flag recording whether it already lies in the base (a-coordinates zero).
struct BetaImage {
  ExtElement value;
  bool in_base = false;
  HSeries base_value;  // the a^0 coordinate; the full story when in_base
};

// Ring map A -> a, B -> 1, Delta -> h - 26 (so Delta inverts to the series
// inverse of h - 26). Only the built-in prime-5 level-4 chart is supported.
BetaImage beta(const MFPoly& f, const WData& model);

// Exact q-expansion with finitely many negative exponents: coefficients run
// from q^{lowest} through the stated truncation, all exact rationals.
class QSeries {
 public:
  QSeries(int m0, std::vector<Rat> coeffs, int trunc);

  static QSeries zero(int trunc);
  static QSeries constant(const Rat& c, int trunc);
  static QSeries monomial(int m, const Rat& c, int trunc);

  int lowest() const { return m0_; }
  int truncation() const { return trunc_; }
  bool is_zero() const { return c_.empty(); }
  // Coefficient of q^m; zero below the lowest exponent, error above the
  // truncation (that coefficient is unknown).
  Rat coeff(int m) const;

  QSeries operator-() const;
  QSeries operator+(const QSeries& o) const;
  QSeries operator-(const QSeries& o) const;
  QSeries operator*(const QSeries& o) const;
  QSeries scale(const Rat& s) const;
  QSeries pow(int e) const;
  QSeries with_truncation(int t) const;

  // Coefficientwise equality through the smaller truncation.
  bool operator==(const QSeries& o) const;
  bool operator!=(const QSeries& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void normalize();

  int m0_ = 0;
  std::vector<Rat> c_;  // q^{m0_} .. q^{m0_ + size - 1}
  int trunc_ = 0;
};

// Finite combination sum_j (log q)^j h_j of q-series, carrying its weight as
// caller-supplied metadata (the expansion alone does not determine it).
class LogQSeries {
 public:
  LogQSeries(int weight, std::vector<QSeries> comps);

  static LogQSeries from_qseries(int weight, const QSeries& h0);
  // The bare series log q: weight -2, components (0, 1).
  static LogQSeries log_q(int trunc);

  int weight() const { return k_; }
  // Largest power of log q carried (0 for a plain q-series or zero).
  int order() const { return static_cast<int>(h_.size()) - 1; }
  const std::vector<QSeries>& comps() const { return h_; }
  const QSeries& comp(int j) const;
  bool is_zero() const;
  int truncation() const;

  LogQSeries operator-() const;
  LogQSeries operator+(const LogQSeries& o) const;
  LogQSeries operator-(const LogQSeries& o) const;
  LogQSeries scale(const Rat& s) const;

  bool operator==(const LogQSeries& o) const;
  bool operator!=(const LogQSeries& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  int k_ = 0;
  std::vector<QSeries> h_;  // h_0, h_1, ..., trailing zeros pruned
};

// Divisor power sum over the divisors of m; s may be negative.
Rat sigma(int s, long m);

// q prod_{n>=1} (1 - q^n)^24, exact integer coefficients through q^trunc.
QSeries delta_qexp(int trunc);

// 1 - 24 sum sigma_1(j) q^j through q^trunc.
QSeries e2_qexp(int trunc);

// q d/dq, coefficientwise m * a_m.
QSeries d_operator(const QSeries& f);
// Same on logarithmic series, via D (log q)^j = j (log q)^{j-1}; raises the
// weight by 2.
LogQSeries d_operator(const LogQSeries& f);

// Df - (k/12) E2 f for a weight-k series.
QSeries serre_derivative(const QSeries& f, int k);

// Hecke operator at p on a weight-k logarithmic series: on the (log q)^j
// component, b_m = p^{j+k-1} a_{m/p} + p^{-j} a_{pm} (first term only when
// p | m). Output truncation shrinks to floor(trunc/p).
LogQSeries hecke_Tp(const LogQSeries& f, long p);
// Classical convenience wrapper for a plain q-series of weight k.
QSeries hecke_Tp(const QSeries& f, int k, long p);

// Second Hecke operator at p: scalar multiplication by p^{k-2}.
LogQSeries hecke_T2p(const LogQSeries& f, long p);

// f - T_p f + p T_{2,p} f.
LogQSeries f_operator(const LogQSeries& f, long p);

// Formal logarithm of a series q^m (1 + tail): m log q plus the alternating
// series for log(1 + tail). The leading coefficient must be exactly 1.
// The result has weight 0.
LogQSeries log_qexp(const QSeries& f);

// Leading constant of the isogeny ratio at a cusp of width m: (-1)^m at
// p = 2 and 1 at odd p, so its p-adic logarithm always vanishes.
Rat cusp_leading_constant(long m, long p);

// Whether the logarithm operation kills the beta image of f, with the
// computed value and the position of the first surviving coefficient.
struct KernelReport {
  bool in_kernel = false;
  HSeries value;           // the logarithm image, canonically reduced
  int first_nonzero = -1;  // h-degree of the first nonzero coefficient
  std::string summary;
};

KernelReport kernel_check(const PsiData& data, const MFPoly& f);

}  // namespace heckeops

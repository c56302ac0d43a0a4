#include "modular_forms.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace heckeops {

namespace {

BiPoly delta_numerator() {
  // A^2 B^4 (A^2 - 16B) = A^4 B^4 - 16 A^2 B^5
  return BiPoly::monomial(4, 4, 1) + BiPoly::monomial(2, 5, -16);
}

// The rank-4 chart extension is cached per precision so that images from
// separate substitution calls live in the same ring object.
ExtRingPtr chart_ring(const HSeries::Params& pr) {
  static std::mutex mu;
  static std::vector<std::pair<HSeries::Params, ExtRingPtr>> cache;
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& [key, ring] : cache)
    if (key.p == pr.p && key.L == pr.L && key.M == pr.M) return ring;
  std::vector<HSeries> modulus{HSeries(pr, {Rat(26), Rat(-1)}), HSeries::zero(pr),
                               HSeries::constant(pr, -16), HSeries::zero(pr)};
  cache.emplace_back(pr, std::make_shared<const ExtRing>(pr, std::move(modulus)));
  return cache.back().second;
}

}  // namespace

MFPoly::MFPoly(BiPoly numerator, int delta_exp, int weight)
    : num_(std::move(numerator)), e_(delta_exp), k_(weight) {
  if (e_ < 0) fail(ErrorCode::invalid_argument, "denominator exponent must be nonnegative");
  long w = 0;
  if (!num_.weighted_homogeneous(1, 2, &w))
    fail(ErrorCode::invalid_argument, "numerator is not weighted-homogeneous");
  if (!num_.is_zero() && w != k_ + 12L * e_)
    fail(ErrorCode::invalid_argument, "numerator weight does not match weight + 12*exponent");
}

MFPoly MFPoly::zero(int weight) { return MFPoly(BiPoly(), 0, weight); }
MFPoly MFPoly::constant(const Rat& c) { return MFPoly(BiPoly::constant(c), 0, 0); }
MFPoly MFPoly::gen_A() { return MFPoly(BiPoly::A(), 0, 1); }
MFPoly MFPoly::gen_B() { return MFPoly(BiPoly::B(), 0, 2); }

MFPoly MFPoly::hasse_lift() {
  BiPoly H = BiPoly::monomial(4, 0, 1) + BiPoly::monomial(2, 1, -16) + BiPoly::monomial(0, 2, 26);
  return MFPoly(H, 0, 4);
}

MFPoly MFPoly::discriminant() { return MFPoly(delta_numerator(), 0, 12); }
MFPoly MFPoly::discriminant_inverse() { return MFPoly(BiPoly::constant(1), 1, -12); }

MFPoly MFPoly::operator-() const { return MFPoly(-num_, e_, k_); }

MFPoly MFPoly::operator+(const MFPoly& o) const {
  if (k_ != o.k_ && !is_zero() && !o.is_zero())
    fail(ErrorCode::invalid_argument, "cannot add modular-form elements of different weights");
  const int k = is_zero() ? o.k_ : k_;
  const int e = std::max(e_, o.e_);
  const BiPoly lifted_a = num_ * delta_numerator().pow(e - e_);
  const BiPoly lifted_b = o.num_ * delta_numerator().pow(e - o.e_);
  return MFPoly(lifted_a + lifted_b, e, k);
}

MFPoly MFPoly::operator-(const MFPoly& o) const { return *this + (-o); }

MFPoly MFPoly::operator*(const MFPoly& o) const {
  return MFPoly(num_ * o.num_, e_ + o.e_, k_ + o.k_);
}

MFPoly MFPoly::scale(const Rat& s) const { return MFPoly(num_.scale(s), e_, k_); }

MFPoly MFPoly::pow(int e) const {
  if (e < 0) fail(ErrorCode::invalid_argument, "negative power of a modular-form element");
  MFPoly r = constant(1);
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

bool MFPoly::operator==(const MFPoly& o) const {
  if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
  if (k_ != o.k_) return false;
  return num_ * delta_numerator().pow(o.e_) == o.num_ * delta_numerator().pow(e_);
}

std::string MFPoly::to_string() const {
  std::ostringstream out;
  out << "(" << num_.to_string() << ")";
  if (e_ > 0) out << " / Delta^" << e_;
  out << "  [weight " << k_ << "]";
  return out.str();
}

BetaImage beta(const MFPoly& f, const WData& model) {
  if (model.p() != 5 || model.level() != 4)
    fail(ErrorCode::unsupported, "the chart substitution is defined for the prime-5 level-4 model");
  const HSeries::Params pr = model.params();
  // a^4 - 16 a^2 + (26 - h) = 0
  ExtRingPtr ring = chart_ring(pr);
  const ExtElement a = ExtElement::theta(ring);

  ExtElement acc = ExtElement::zero(ring);
  for (const auto& [key, c] : f.numerator().terms()) acc = acc + a.pow(key.first).scale(c);
  if (f.delta_exp() > 0) {
    // Delta maps to h - 26, a unit of the base ring.
    const HSeries delta_img = HSeries(pr, {Rat(-26), Rat(1)});
    acc = acc.scale(delta_img.invert().pow(f.delta_exp()));
  }

  BetaImage out;
  out.value = acc;
  out.in_base = acc.is_scalar();
  out.base_value = acc.coord(0);
  return out;
}

QSeries::QSeries(int m0, std::vector<Rat> coeffs, int trunc)
    : m0_(m0), c_(std::move(coeffs)), trunc_(trunc) {
  normalize();
}

void QSeries::normalize() {
  if (static_cast<long>(m0_) + static_cast<long>(c_.size()) - 1 > trunc_) {
    if (trunc_ < m0_)
      c_.clear();
    else
      c_.resize(static_cast<size_t>(trunc_ - m0_ + 1));
  }
  size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
    m0_ += static_cast<int>(lead);
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  if (c_.empty()) m0_ = 0;
}

QSeries QSeries::zero(int trunc) { return QSeries(0, {}, trunc); }
QSeries QSeries::constant(const Rat& c, int trunc) { return QSeries(0, {c}, trunc); }
QSeries QSeries::monomial(int m, const Rat& c, int trunc) { return QSeries(m, {c}, trunc); }

Rat QSeries::coeff(int m) const {
  if (m > trunc_) fail(ErrorCode::precision, "coefficient beyond the stated truncation");
  if (m < m0_ || m >= m0_ + static_cast<int>(c_.size())) return 0;
  return c_[static_cast<size_t>(m - m0_)];
}

QSeries QSeries::operator-() const {
  std::vector<Rat> v(c_);
  for (Rat& x : v) x = -x;
  return QSeries(m0_, std::move(v), trunc_);
}

QSeries QSeries::operator+(const QSeries& o) const {
  const int trunc = std::min(trunc_, o.trunc_);
  if (is_zero()) return o.with_truncation(trunc);
  if (o.is_zero()) return with_truncation(trunc);
  const int lo = std::min(m0_, o.m0_);
  const int hi = std::min(
      trunc, std::max(m0_ + static_cast<int>(c_.size()), o.m0_ + static_cast<int>(o.c_.size())) - 1);
  std::vector<Rat> v;
  for (int m = lo; m <= hi; ++m) {
    Rat s = 0;
    if (m >= m0_ && m < m0_ + static_cast<int>(c_.size())) s += c_[static_cast<size_t>(m - m0_)];
    if (m >= o.m0_ && m < o.m0_ + static_cast<int>(o.c_.size()))
      s += o.c_[static_cast<size_t>(m - o.m0_)];
    v.push_back(std::move(s));
  }
  return QSeries(lo, std::move(v), trunc);
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + (-o); }

QSeries QSeries::operator*(const QSeries& o) const {
  if (is_zero() || o.is_zero()) return zero(std::min(trunc_, o.trunc_));
  const int trunc = std::min(trunc_ + o.m0_, o.trunc_ + m0_);
  const int lo = m0_ + o.m0_;
  if (trunc < lo) return zero(trunc);
  std::vector<Rat> v(static_cast<size_t>(trunc - lo + 1), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      const long m = m0_ + static_cast<long>(i) + o.m0_ + static_cast<long>(j);
      if (m > trunc) break;
      v[static_cast<size_t>(m - lo)] += c_[i] * o.c_[j];
    }
  }
  return QSeries(lo, std::move(v), trunc);
}

QSeries QSeries::scale(const Rat& s) const {
  std::vector<Rat> v(c_);
  for (Rat& x : v) x *= s;
  return QSeries(m0_, std::move(v), trunc_);
}

QSeries QSeries::pow(int e) const {
  if (e < 0) fail(ErrorCode::invalid_argument, "negative power of a q-series");
  QSeries r = constant(1, trunc_ - std::min(0, m0_) * (e - 1));
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

QSeries QSeries::with_truncation(int t) const {
  if (t > trunc_) fail(ErrorCode::precision, "cannot extend a truncated q-series");
  return QSeries(m0_, c_, t);
}

bool QSeries::operator==(const QSeries& o) const {
  const int trunc = std::min(trunc_, o.trunc_);
  const int lo = std::min(is_zero() ? 0 : m0_, o.is_zero() ? 0 : o.m0_);
  for (int m = std::min(lo, 0); m <= trunc; ++m)
    if (coeff(m) != o.coeff(m)) return false;
  return true;
}

std::string QSeries::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rat a = c_[i];
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    const int m = m0_ + static_cast<int>(i);
    if (a != 1 || m == 0) out << a.str();
    if (m != 0) {
      if (a != 1) out << "*";
      out << "q";
      if (m != 1) out << "^" << m;
    }
    first = false;
  }
  out << " + O(q^" << (trunc_ + 1) << ")";
  return out.str();
}

LogQSeries::LogQSeries(int weight, std::vector<QSeries> comps) : k_(weight), h_(std::move(comps)) {
  while (h_.size() > 1 && h_.back().is_zero()) h_.pop_back();
  if (h_.empty()) h_.push_back(QSeries::zero(0));
}

LogQSeries LogQSeries::from_qseries(int weight, const QSeries& h0) {
  return LogQSeries(weight, {h0});
}

LogQSeries LogQSeries::log_q(int trunc) {
  return LogQSeries(-2, {QSeries::zero(trunc), QSeries::constant(1, trunc)});
}

const QSeries& LogQSeries::comp(int j) const {
  if (j < 0 || j > order()) fail(ErrorCode::invalid_argument, "log-power index out of range");
  return h_[static_cast<size_t>(j)];
}

bool LogQSeries::is_zero() const {
  for (const QSeries& h : h_)
    if (!h.is_zero()) return false;
  return true;
}

int LogQSeries::truncation() const {
  int t = h_[0].truncation();
  for (const QSeries& h : h_) t = std::min(t, h.truncation());
  return t;
}

LogQSeries LogQSeries::operator-() const {
  std::vector<QSeries> v;
  for (const QSeries& h : h_) v.push_back(-h);
  return LogQSeries(k_, std::move(v));
}

LogQSeries LogQSeries::operator+(const LogQSeries& o) const {
  if (k_ != o.k_ && !is_zero() && !o.is_zero())
    fail(ErrorCode::invalid_argument, "cannot add logarithmic series of different weights");
  const int k = is_zero() ? o.k_ : k_;
  const int t = std::min(truncation(), o.truncation());
  std::vector<QSeries> v;
  const int top = std::max(order(), o.order());
  for (int j = 0; j <= top; ++j) {
    QSeries s = QSeries::zero(t);
    if (j <= order()) s = s + h_[static_cast<size_t>(j)];
    if (j <= o.order()) s = s + o.h_[static_cast<size_t>(j)];
    v.push_back(s.with_truncation(t));
  }
  return LogQSeries(k, std::move(v));
}

LogQSeries LogQSeries::operator-(const LogQSeries& o) const { return *this + (-o); }

LogQSeries LogQSeries::scale(const Rat& s) const {
  std::vector<QSeries> v;
  for (const QSeries& h : h_) v.push_back(h.scale(s));
  return LogQSeries(k_, std::move(v));
}

bool LogQSeries::operator==(const LogQSeries& o) const {
  const int top = std::max(order(), o.order());
  const int t = std::min(truncation(), o.truncation());
  for (int j = 0; j <= top; ++j) {
    const QSeries a = j <= order() ? h_[static_cast<size_t>(j)] : QSeries::zero(t);
    const QSeries b = j <= o.order() ? o.h_[static_cast<size_t>(j)] : QSeries::zero(t);
    if (a.with_truncation(std::min(t, a.truncation())) !=
        b.with_truncation(std::min(t, b.truncation())))
      return false;
  }
  return true;
}

std::string LogQSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int j = order(); j >= 0; --j) {
    const QSeries& h = h_[static_cast<size_t>(j)];
    if (h.is_zero() && !(first && j == 0)) continue;
    if (!first) out << " + ";
    if (j == 1)
      out << "(log q) * ";
    else if (j > 1)
      out << "(log q)^" << j << " * ";
    out << "(" << h.to_string() << ")";
    first = false;
  }
  return out.str();
}

Rat sigma(int s, long m) {
  if (m <= 0) fail(ErrorCode::invalid_argument, "divisor sum needs a positive argument");
  Rat total = 0;
  for (long d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    total += pow_rat(Rat(d), s);
    const long e = m / d;
    if (e != d) total += pow_rat(Rat(e), s);
  }
  return total;
}

QSeries delta_qexp(int trunc) {
  if (trunc < 1) fail(ErrorCode::invalid_argument, "truncation must be at least 1");
  // Euler product for eta^24 / q: expand prod (1 - q^n) first, then power.
  std::vector<Rat> eul(static_cast<size_t>(trunc), Rat(0));
  eul[0] = 1;
  for (int n = 1; n < trunc; ++n)
    for (int m = trunc - 1; m >= n; --m) eul[static_cast<size_t>(m)] -= eul[static_cast<size_t>(m - n)];
  QSeries base(0, std::move(eul), trunc - 1);
  QSeries prod = QSeries::constant(1, trunc - 1);
  for (int i = 0; i < 24; ++i) prod = (prod * base).with_truncation(trunc - 1);
  return QSeries::monomial(1, 1, trunc) * prod;
}

QSeries e2_qexp(int trunc) {
  if (trunc < 1) fail(ErrorCode::invalid_argument, "truncation must be at least 1");
  std::vector<Rat> v(static_cast<size_t>(trunc) + 1);
  v[0] = 1;
  for (long j = 1; j <= trunc; ++j) v[static_cast<size_t>(j)] = Rat(-24) * sigma(1, j);
  return QSeries(0, std::move(v), trunc);
}

QSeries d_operator(const QSeries& f) {
  std::vector<Rat> v;
  for (int m = f.lowest(); m <= f.truncation(); ++m) v.push_back(Rat(m) * f.coeff(m));
  return QSeries(f.lowest(), std::move(v), f.truncation());
}

LogQSeries d_operator(const LogQSeries& f) {
  std::vector<QSeries> v;
  for (int j = 0; j <= f.order(); ++j) {
    QSeries part = d_operator(f.comp(j));
    if (j + 1 <= f.order()) part = part + f.comp(j + 1).scale(j + 1);
    v.push_back(part);
  }
  return LogQSeries(f.weight() + 2, std::move(v));
}

QSeries serre_derivative(const QSeries& f, int k) {
  const QSeries e2 = e2_qexp(f.truncation() - std::min(f.lowest(), 0));
  return d_operator(f) - (e2 * f).scale(Rat(k) / 12);
}

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : a / b; }

QSeries hecke_Tp_component(const QSeries& h, int j, int k, long p) {
  const int ip = static_cast<int>(p);
  const int T = h.truncation();
  // b_m needs both a_{pm} and (when p | m) a_{m/p} inside the known range.
  const int trunc = std::min(floor_div(T, ip), T >= 0 ? floor_div(T, ip) : ip * T);
  if (h.is_zero()) return QSeries::zero(trunc);
  const Rat up = pow_rat(Rat(p), j + k - 1);                // multiplies a_{m/p}
  const Rat down = pow_rat(Rat(p), -static_cast<long>(j));  // multiplies a_{pm}
  const int lo = std::min(std::min(h.lowest() * ip, ceil_div(h.lowest(), ip)), trunc);
  std::vector<Rat> v;
  for (int m = lo; m <= trunc; ++m) {
    Rat b = 0;
    if (m % ip == 0) b += up * h.coeff(m / ip);
    b += down * h.coeff(m * ip);
    v.push_back(std::move(b));
  }
  return QSeries(lo, std::move(v), trunc);
}

}  // namespace

LogQSeries hecke_Tp(const LogQSeries& f, long p) {
  if (p < 2) fail(ErrorCode::invalid_argument, "Hecke operator needs a prime index");
  std::vector<QSeries> v;
  for (int j = 0; j <= f.order(); ++j) v.push_back(hecke_Tp_component(f.comp(j), j, f.weight(), p));
  return LogQSeries(f.weight(), std::move(v));
}

QSeries hecke_Tp(const QSeries& f, int k, long p) {
  return hecke_Tp(LogQSeries::from_qseries(k, f), p).comp(0);
}

LogQSeries hecke_T2p(const LogQSeries& f, long p) {
  if (p < 2) fail(ErrorCode::invalid_argument, "Hecke operator needs a prime index");
  return f.scale(pow_rat(Rat(p), f.weight() - 2));
}

LogQSeries f_operator(const LogQSeries& f, long p) {
  return f - hecke_Tp(f, p) + hecke_T2p(f, p).scale(p);
}

LogQSeries log_qexp(const QSeries& f) {
  if (f.is_zero()) fail(ErrorCode::invalid_argument, "logarithm of the zero series");
  const int m = f.lowest();
  if (f.coeff(m) != 1)
    fail(ErrorCode::invalid_argument, "logarithm needs leading coefficient exactly 1");
  const int t = f.truncation() - m;
  // tail = f / q^m - 1, supported on strictly positive exponents
  QSeries tail = QSeries(0, [&] {
    std::vector<Rat> v;
    for (int i = m; i <= f.truncation(); ++i) v.push_back(f.coeff(i));
    v[0] -= 1;
    return v;
  }(), t);
  QSeries acc = QSeries::zero(t);
  QSeries power = QSeries::constant(1, t);
  for (int k = 1; k <= t && !tail.is_zero(); ++k) {
    power = (power * tail).with_truncation(t);
    if (power.is_zero()) break;
    acc = acc + power.scale(Rat(k % 2 == 1 ? 1 : -1) / k);
  }
  std::vector<QSeries> comps{acc};
  if (m != 0) comps.push_back(QSeries::constant(m, t));
  return LogQSeries(0, std::move(comps));
}

Rat cusp_leading_constant(long m, long p) {
  if (p == 2) return (m % 2 == 0) ? Rat(1) : Rat(-1);
  return Rat(1);
}

KernelReport kernel_check(const PsiData& data, const MFPoly& f) {
  const BetaImage img = beta(f, data.model());
  if (!img.in_base)
    fail(ErrorCode::unsupported,
         "the image has nonzero a-components; the logarithm needs extension scalars");
  // A Delta denominator is peeled off through the homomorphism property
  // log(n / d^e) = log(n) - e log(d). This keeps every logarithm argument
  // polynomial; the series inverse of h - 26 has a truncated tail that the
  // operation would smear into low coefficients.
  const MFPoly numerator_part(f.numerator(), 0, f.weight() + 12 * f.delta_exp());
  HSeries value = ell(data, beta(numerator_part, data.model()).base_value);
  if (f.delta_exp() > 0) {
    const HSeries delta_img(data.model().params(), {Rat(-26), Rat(1)});
    value = value - ell(data, delta_img) * Rat(f.delta_exp());
  }
  KernelReport rep;
  rep.value = value.reduced_mod_pM();
  rep.in_kernel = rep.value.is_zero();
  rep.first_nonzero = -1;
  if (!rep.in_kernel) {
    for (int b = 0; b <= rep.value.degree(); ++b)
      if (rep.value.coeff(b) != 0) {
        rep.first_nonzero = b;
        break;
      }
  }
  std::ostringstream out;
  if (rep.in_kernel)
    out << "logarithm image is zero at precision (" << data.model().params().M << ", "
        << data.model().params().L << ")";
  else
    out << "logarithm image is nonzero; first surviving coefficient at h^" << rep.first_nonzero;
  rep.summary = out.str();
  return rep;
}

}  // namespace heckeops

#include "ext.hpp"

#include <sstream>

namespace heckeops {

ExtRing::ExtRing(HSeries::Params base, std::vector<HSeries> modulus)
    : base_(base), m_(std::move(modulus)) {
  if (m_.empty()) fail(ErrorCode::invalid_argument, "extension rank must be >= 1");
  if (static_cast<int>(m_.size()) > 12)
    fail(ErrorCode::unsupported, "extension rank above 12 not supported");
  for (HSeries& m : m_) {
    if (m.is_zero()) {
      m = HSeries::zero(base_);
      continue;
    }
    if (m.p() != base_.p)
      fail(ErrorCode::invalid_argument, "modulus coefficient over a different prime");
    m = m.with_truncation(base_.L).with_pprec(base_.M);
  }
}

ExtElement::ExtElement(ExtRingPtr ring, std::vector<HSeries> coords)
    : ring_(std::move(ring)), coords_(std::move(coords)) {
  if (!ring_) fail(ErrorCode::invalid_argument, "null extension ring");
  const size_t r = static_cast<size_t>(ring_->rank());
  if (coords_.size() > r)
    fail(ErrorCode::invalid_argument, "coordinate vector longer than extension rank");
  coords_.resize(r, HSeries());
  for (HSeries& c : coords_) {
    if (c.p() == 0) c = HSeries::zero(ring_->base());
    else c = c.with_truncation(ring_->base().L).with_pprec(ring_->base().M);
  }
}

ExtElement ExtElement::zero(ExtRingPtr ring) { return ExtElement(std::move(ring), {}); }

ExtElement ExtElement::scalar(ExtRingPtr ring, const HSeries& s) {
  return ExtElement(std::move(ring), {s});
}

ExtElement ExtElement::scalar(ExtRingPtr ring, const Rat& s) {
  HSeries c = HSeries::constant(ring->base(), s);
  return ExtElement(std::move(ring), {c});
}

ExtElement ExtElement::theta(ExtRingPtr ring) {
  if (ring->rank() == 1) {
    // theta = -m_0 in the rank-one case.
    HSeries c = -ring->modulus()[0];
    return ExtElement(std::move(ring), {c});
  }
  std::vector<HSeries> v{HSeries::zero(ring->base()), HSeries::constant(ring->base(), 1)};
  return ExtElement(std::move(ring), std::move(v));
}

bool ExtElement::is_zero() const {
  for (const HSeries& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

bool ExtElement::is_scalar() const {
  for (size_t k = 1; k < coords_.size(); ++k)
    if (!coords_[k].is_zero()) return false;
  return true;
}

static void check_same_ring(const ExtElement& a, const ExtElement& b) {
  if (a.ring() != b.ring())
    fail(ErrorCode::invalid_argument, "extension elements from different rings");
}

ExtElement ExtElement::operator-() const {
  std::vector<HSeries> v;
  v.reserve(coords_.size());
  for (const HSeries& c : coords_) v.push_back(-c);
  return ExtElement(ring_, std::move(v));
}

ExtElement ExtElement::operator+(const ExtElement& o) const {
  check_same_ring(*this, o);
  std::vector<HSeries> v;
  v.reserve(coords_.size());
  for (size_t k = 0; k < coords_.size(); ++k) v.push_back(coords_[k] + o.coords_[k]);
  return ExtElement(ring_, std::move(v));
}

ExtElement ExtElement::operator-(const ExtElement& o) const {
  check_same_ring(*this, o);
  std::vector<HSeries> v;
  v.reserve(coords_.size());
  for (size_t k = 0; k < coords_.size(); ++k) v.push_back(coords_[k] - o.coords_[k]);
  return ExtElement(ring_, std::move(v));
}

ExtElement ExtElement::operator*(const ExtElement& o) const {
  check_same_ring(*this, o);
  const int r = ring_->rank();
  const std::vector<HSeries>& m = ring_->modulus();
  std::vector<HSeries> prod(static_cast<size_t>(2 * r - 1), HSeries::zero(ring_->base()));
  for (int i = 0; i < r; ++i) {
    if (coords_[i].is_zero()) continue;
    for (int j = 0; j < r; ++j) {
      if (o.coords_[j].is_zero()) continue;
      prod[i + j] = prod[i + j] + coords_[i] * o.coords_[j];
    }
  }
  // theta^r = -(m_{r-1} theta^{r-1} + ... + m_0), applied top down.
  for (int k = 2 * r - 2; k >= r; --k) {
    if (prod[k].is_zero()) continue;
    HSeries c = prod[k];
    for (int j = 0; j < r; ++j) {
      if (m[j].is_zero()) continue;
      prod[k - r + j] = prod[k - r + j] - c * m[j];
    }
    prod[k] = HSeries::zero(ring_->base());
  }
  prod.resize(static_cast<size_t>(r));
  return ExtElement(ring_, std::move(prod));
}

ExtElement ExtElement::scale(const HSeries& s) const {
  std::vector<HSeries> v;
  v.reserve(coords_.size());
  for (const HSeries& c : coords_) v.push_back(c * s);
  return ExtElement(ring_, std::move(v));
}

ExtElement ExtElement::scale(const Rat& s) const {
  std::vector<HSeries> v;
  v.reserve(coords_.size());
  for (const HSeries& c : coords_) v.push_back(c * s);
  return ExtElement(ring_, std::move(v));
}

ExtElement ExtElement::pow(long e) const {
  if (e < 0) fail(ErrorCode::invalid_argument, "negative extension power; use inverse first");
  ExtElement r = scalar(ring_, Rat(1));
  ExtElement b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::vector<std::vector<HSeries>> mult_matrix(const ExtElement& x) {
  const ExtRingPtr& ring = x.ring();
  const int r = ring->rank();
  const std::vector<HSeries>& m = ring->modulus();
  std::vector<std::vector<HSeries>> a(
      static_cast<size_t>(r), std::vector<HSeries>(static_cast<size_t>(r), HSeries::zero(ring->base())));
  std::vector<HSeries> cur = x.coords();
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) a[i][j] = cur[i];
    if (j + 1 == r) break;
    // cur <- cur * theta.
    HSeries top = cur[r - 1];
    for (int i = r - 1; i >= 1; --i) cur[i] = cur[i - 1];
    cur[0] = HSeries::zero(ring->base());
    if (!top.is_zero())
      for (int i = 0; i < r; ++i)
        if (!m[i].is_zero()) cur[i] = cur[i] - top * m[i];
  }
  return a;
}

HSeries matrix_determinant(const std::vector<std::vector<HSeries>>& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) fail(ErrorCode::invalid_argument, "determinant of empty matrix");
  if (n > 12) fail(ErrorCode::unsupported, "determinant expansion limited to 12x12");
  const HSeries::Params pr = a[0][0].params();
  // f[mask] = determinant of the submatrix on rows 0..s-1 and columns in mask,
  // s = popcount(mask); built by expansion along the last row.
  std::vector<HSeries> f(static_cast<size_t>(1) << n);
  f[0] = HSeries::constant(pr, 1);
  for (unsigned mask = 1; mask < f.size(); ++mask) {
    const int s = __builtin_popcount(mask);
    HSeries acc = HSeries::zero(pr);
    int sign = 1;
    for (int j = n - 1; j >= 0; --j) {
      if (!(mask & (1u << j))) continue;
      // j runs over set bits from high to low, so sign tracks the parity of
      // the number of set bits above j.
      if (!a[s - 1][j].is_zero() && !f[mask ^ (1u << j)].is_zero()) {
        HSeries term = a[s - 1][j] * f[mask ^ (1u << j)];
        acc = (sign > 0) ? acc + term : acc - term;
      }
      sign = -sign;
    }
    f[mask] = acc;
  }
  return f[f.size() - 1];
}

HSeries ExtElement::trace() const {
  std::vector<std::vector<HSeries>> a = mult_matrix(*this);
  HSeries t = HSeries::zero(ring_->base());
  for (size_t k = 0; k < a.size(); ++k) t = t + a[k][k];
  return t;
}

HSeries ExtElement::norm() const { return matrix_determinant(mult_matrix(*this)); }

ExtElement ExtElement::inverse() const {
  const int r = ring_->rank();
  if (r == 1) return ExtElement(ring_, {coords_[0].invert()});
  std::vector<std::vector<HSeries>> a = mult_matrix(*this);
  HSeries det = matrix_determinant(a);
  HSeries det_inv = det.invert();  // errors if the norm is not a unit
  std::vector<HSeries> v(static_cast<size_t>(r), HSeries::zero(ring_->base()));
  // Column 0 of the adjugate: v[i] = (-1)^i * minor(row 0, column i).
  for (int i = 0; i < r; ++i) {
    std::vector<std::vector<HSeries>> sub;
    sub.reserve(static_cast<size_t>(r - 1));
    for (int row = 1; row < r; ++row) {
      std::vector<HSeries> line;
      line.reserve(static_cast<size_t>(r - 1));
      for (int col = 0; col < r; ++col)
        if (col != i) line.push_back(a[row][col]);
      sub.push_back(std::move(line));
    }
    HSeries minor = matrix_determinant(sub);
    v[i] = (i % 2 == 0) ? minor * det_inv : -(minor * det_inv);
  }
  return ExtElement(ring_, std::move(v));
}

ExtElement ExtElement::reduced_mod_p_power(int k) const {
  std::vector<HSeries> v;
  v.reserve(coords_.size());
  for (const HSeries& c : coords_) v.push_back(c.reduced_mod_p_power(k));
  return ExtElement(ring_, std::move(v));
}

bool ExtElement::congruent(const ExtElement& o) const {
  check_same_ring(*this, o);
  for (size_t k = 0; k < coords_.size(); ++k)
    if (!coords_[k].congruent(o.coords_[k])) return false;
  return true;
}

bool ExtElement::equals_exact(const ExtElement& o) const {
  check_same_ring(*this, o);
  for (size_t k = 0; k < coords_.size(); ++k)
    if (!coords_[k].equals_exact(o.coords_[k])) return false;
  return true;
}

std::string ExtElement::to_string(const std::string& var) const {
  std::ostringstream out;
  bool first = true;
  for (size_t k = 0; k < coords_.size(); ++k) {
    if (coords_[k].is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << coords_[k].to_string() << ")";
    if (k == 1) out << "*" << var;
    else if (k > 1) out << "*" << var << "^" << k;
  }
  if (first) return "0";
  return out.str();
}

ExtElement ext_dual(const ExtRingPtr& ring) {
  const int r = ring->rank();
  const std::vector<HSeries>& m = ring->modulus();
  std::vector<HSeries> v(static_cast<size_t>(r));
  for (int k = 0; k + 1 < r; ++k) v[k] = -m[k + 1];
  v[r - 1] = HSeries::constant(ring->base(), -1);
  return ExtElement(ring, std::move(v));
}

std::vector<ExtElement> dual_power_expansion(const ExtRingPtr& ring, int count) {
  if (count < 1) fail(ErrorCode::invalid_argument, "need at least one dual power");
  std::vector<ExtElement> out;
  out.reserve(static_cast<size_t>(count));
  out.push_back(ExtElement::scalar(ring, Rat(1)));
  if (count == 1) return out;
  ExtElement d = ext_dual(ring);
  out.push_back(d);
  for (int t = 2; t < count; ++t) out.push_back(out.back() * d);
  return out;
}

}  // namespace heckeops

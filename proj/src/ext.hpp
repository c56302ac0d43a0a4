#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hseries.hpp"

namespace heckeops {

// Free rank-r extension R[theta]/(theta^r + m_{r-1} theta^{r-1} + ... + m_0)
// of the coefficient ring R of truncated series. Elements are coordinate
// vectors in the basis 1, theta, ..., theta^{r-1}.
class ExtRing {
 public:
  // modulus holds the low-order coefficients m_0..m_{r-1} of the monic
  // defining polynomial.
  ExtRing(HSeries::Params base, std::vector<HSeries> modulus);

  const HSeries::Params& base() const { return base_; }
  int rank() const { return static_cast<int>(m_.size()); }
  const std::vector<HSeries>& modulus() const { return m_; }

 private:
  HSeries::Params base_;
  std::vector<HSeries> m_;
};

using ExtRingPtr = std::shared_ptr<const ExtRing>;

class ExtElement {
 public:
  ExtElement() = default;
  ExtElement(ExtRingPtr ring, std::vector<HSeries> coords);

  static ExtElement zero(ExtRingPtr ring);
  static ExtElement scalar(ExtRingPtr ring, const HSeries& s);
  static ExtElement scalar(ExtRingPtr ring, const Rat& s);
  // The adjoined root theta.
  static ExtElement theta(ExtRingPtr ring);

  const ExtRingPtr& ring() const { return ring_; }
  const std::vector<HSeries>& coords() const { return coords_; }
  const HSeries& coord(int k) const { return coords_.at(static_cast<size_t>(k)); }
  bool is_zero() const;
  // True when all coordinates above theta^0 vanish identically.
  bool is_scalar() const;

  ExtElement operator-() const;
  ExtElement operator+(const ExtElement& o) const;
  ExtElement operator-(const ExtElement& o) const;
  ExtElement operator*(const ExtElement& o) const;
  ExtElement scale(const HSeries& s) const;
  ExtElement scale(const Rat& s) const;
  ExtElement pow(long e) const;

  // Trace and determinant of the multiplication-by-this matrix over R.
  HSeries trace() const;
  HSeries norm() const;
  // Inverse through the adjugate of the multiplication matrix; requires
  // norm() to be a unit of R.
  ExtElement inverse() const;

  // Coordinatewise canonical reduction mod p^k (guard digits included by the
  // caller); coordinates must be p-integral.
  ExtElement reduced_mod_p_power(int k) const;

  bool congruent(const ExtElement& o) const;
  bool equals_exact(const ExtElement& o) const;

  std::string to_string(const std::string& var = "alpha") const;

 private:
  ExtRingPtr ring_;
  std::vector<HSeries> coords_;
};

// Row-major multiplication matrix of x: entry [i][j] is the theta^i coordinate
// of x * theta^j.
std::vector<std::vector<HSeries>> mult_matrix(const ExtElement& x);

// Determinant by division-free Laplace expansion over column subsets. Works in
// any commutative coefficient ring, in particular with non-unit pivots.
HSeries matrix_determinant(const std::vector<std::vector<HSeries>>& a);

// The companion element theta~ = -(theta^{r-1} + m_{r-1} theta^{r-2} + ... +
// m_1), which satisfies theta * theta~ = m_0.
ExtElement ext_dual(const ExtRingPtr& ring);

// Powers theta~^0, theta~^1, ..., theta~^{count-1}.
std::vector<ExtElement> dual_power_expansion(const ExtRingPtr& ring, int count);

}  // namespace heckeops

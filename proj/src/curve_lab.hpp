#pragma once

#include <boost/multiprecision/cpp_complex.hpp>
#include <string>
#include <vector>

#include "bivar.hpp"
#include "power_ops.hpp"

namespace heckeops {

using Complex100 = boost::multiprecision::cpp_complex_100;

// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with
// coefficients polynomial in the two formal parameters A (weight 1) and
// B (weight 2).
struct WeierstrassModel {
  std::string name;
  int level = 0;
  BiPoly a1, a2, a3, a4, a6;

  BiPoly b2() const;
  BiPoly b4() const;
  BiPoly b6() const;
  BiPoly b8() const;
  BiPoly discriminant() const;
};

// y^2 + Axy + ABy = x^3 + Bx^2, level 4.
WeierstrassModel weierstrass_c4();
// y^2 + Axy + B^2(A-B)y = x^3 + B(A-B)x^2, level 5.
WeierstrassModel weierstrass_c5();

// Coefficient of x^{p-1} in the (p-1)/2 power of the short-form cubic,
// reduced mod p. Requires p >= 5.
BiPoly hasse_invariant(const WeierstrassModel& model, const Int& p);

// m-division polynomial in x (y eliminated), 1 <= m <= 7, returned as dense
// x-coefficients, low to high. Odd m gives the usual psi_m; even m gives
// psi_m * psi_2, i.e. the squared-variable form psi_m/psi_2 times
// psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, so the result is y-free either way.
std::vector<BiPoly> division_polynomial(const WeierstrassModel& model, int m);

// The p+1 subgroup products prod_{Q in G, Q != O} x(Q)/y(Q) for the order-p
// subgroups G of the curve specialized at (A0, B0), computed numerically:
// division-polynomial roots, orbit pairing under the duplication map, and
// Vieta for the y-root products. Deterministic output order (sorted by real
// then imaginary part).
std::vector<Complex100> numeric_kappas(const WeierstrassModel& model, const Int& p,
                                       const Rat& A0, const Rat& B0);

// Monic degree-(p+1) polynomial in kappa whose coefficients are Laurent
// polynomials in A, B with powers of B as denominators.
struct KappaPolynomial {
  struct Coeff {
    BiPoly numerator;
    int b_exp = 0;  // value = numerator / B^b_exp
  };
  Int p;
  int level = 0;
  std::vector<Coeff> coeffs;  // kappa^0 .. kappa^p; leading kappa^{p+1} is 1

  // Every coefficient weighted-homogeneous of weight -(p-1)(p+1-i).
  void weight_audit() const;
  std::string to_string() const;
};

// Exact reconstruction of the subgroup polynomial from numeric sampling on
// an integer grid: per-coefficient weighted-homogeneity ansatz, rational
// linear solve, integrality check, and held-out re-verification.
KappaPolynomial reconstruct_kappa_polynomial(const WeierstrassModel& model, const Int& p);

// Sets A -> a, B -> 1, imposes the relation read off from the kappa-linear
// coefficient (its numerator at B = 1, with constant term shifted by -h),
// and demands each coefficient collapse into Z_p[[h]]. Produces the modulus
// data w_0..w_p.
WData specialize_to_E0(const KappaPolynomial& K, const HSeries::Params& pr);

}  // namespace heckeops

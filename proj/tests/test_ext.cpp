#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <random>
#include <vector>

#include "ext.hpp"

using namespace heckeops;

namespace {

HSeries::Params P(int L = 24, int M = 12) { return HSeries::Params{Int(5), L, M}; }

HSeries cst(const HSeries::Params& pr, long c) { return HSeries::constant(pr, c); }

// The rank-6 ring R[alpha]/(alpha^6 - 10a^5 + 35a^4 - 60a^3 + 55a^2 - h a + 5).
ExtRingPtr sextic_ring(const HSeries::Params& pr) {
  std::vector<HSeries> m{cst(pr, 5), -HSeries::h(pr), cst(pr, 55),
                         cst(pr, -60), cst(pr, 35), cst(pr, -10)};
  return std::make_shared<ExtRing>(pr, std::move(m));
}

// Same modulus with h frozen to a rational constant, for comparisons against
// scalar polynomial arithmetic.
ExtRingPtr sextic_at(const HSeries::Params& pr, const Rat& h0) {
  std::vector<HSeries> m{cst(pr, 5), HSeries::constant(pr, -h0), cst(pr, 55),
                         cst(pr, -60), cst(pr, 35), cst(pr, -10)};
  return std::make_shared<ExtRing>(pr, std::move(m));
}

HSeries random_series(std::mt19937& rng, const HSeries::Params& pr, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long> coeff(-9, 9);
  std::vector<Rat> v(static_cast<size_t>(deg(rng)) + 1);
  for (Rat& c : v) c = coeff(rng);
  return HSeries(pr, std::move(v));
}

ExtElement random_element(std::mt19937& rng, const ExtRingPtr& ring, int max_deg) {
  std::vector<HSeries> v;
  for (int k = 0; k < ring->rank(); ++k) v.push_back(random_series(rng, ring->base(), max_deg));
  return ExtElement(ring, std::move(v));
}

// --- dense rational polynomials, used only as an independent oracle ---

using QPoly = std::vector<Rat>;  // low-to-high, no trailing zeros

void qtrim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int qdeg(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

QPoly qmod(QPoly f, const QPoly& g) {
  while (qdeg(f) >= qdeg(g)) {
    Rat q = f.back() / g.back();
    int shift = qdeg(f) - qdeg(g);
    for (int i = 0; i <= qdeg(g); ++i) f[static_cast<size_t>(i + shift)] -= q * g[static_cast<size_t>(i)];
    qtrim(f);
  }
  return f;
}

// Euclidean-style resultant over the rationals.
Rat qresultant(QPoly f, QPoly g) {
  qtrim(f);
  qtrim(g);
  REQUIRE(!f.empty());
  REQUIRE(!g.empty());
  if (qdeg(g) == 0) return pow_rat(g[0], qdeg(f));
  if (qdeg(f) < qdeg(g)) {
    Rat sign = (qdeg(f) * qdeg(g)) % 2 == 0 ? 1 : -1;
    return sign * qresultant(g, f);
  }
  QPoly r = qmod(f, g);
  if (r.empty()) return 0;
  return pow_rat(g.back(), qdeg(f) - qdeg(r)) * qresultant(r, g);
}

}  // namespace

TEST_CASE("rank-2 arithmetic matches closed formulas") {
  auto pr = P();
  // theta^2 = 2
  auto ring = std::make_shared<ExtRing>(pr, std::vector<HSeries>{cst(pr, -2), HSeries::zero(pr)});
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    HSeries a = random_series(rng, pr, 4), b = random_series(rng, pr, 4);
    HSeries c = random_series(rng, pr, 4), d = random_series(rng, pr, 4);
    ExtElement x(ring, {a, b});
    ExtElement y(ring, {c, d});
    ExtElement xy = x * y;
    CHECK(xy.coord(0).equals_exact(a * c + b * d * Rat(2)));
    CHECK(xy.coord(1).equals_exact(a * d + b * c));
    CHECK(x.trace().equals_exact(a * Rat(2)));
    CHECK(x.norm().equals_exact(a * a - b * b * Rat(2)));
  }
}

TEST_CASE("rank-2 with a middle modulus coefficient") {
  auto pr = P();
  // theta^2 + theta + 1 = 0, so norm(a + b theta) = a^2 - ab + b^2.
  auto ring = std::make_shared<ExtRing>(pr, std::vector<HSeries>{cst(pr, 1), cst(pr, 1)});
  HSeries a = HSeries::h(pr) + cst(pr, 3);
  HSeries b = cst(pr, 2);
  ExtElement x(ring, {a, b});
  CHECK(x.trace().equals_exact(a * Rat(2) - b));
  CHECK(x.norm().equals_exact(a * a - a * b + b * b));
}

TEST_CASE("ring identities and multiplicativity of trace and norm") {
  auto pr = P(12, 12);
  std::mt19937 rng(5);
  // Rank 3 with series coefficients in the modulus.
  std::vector<HSeries> m{HSeries::h(pr) + cst(pr, 5), random_series(rng, pr, 2), cst(pr, -3)};
  auto ring = std::make_shared<ExtRing>(pr, std::move(m));
  const ExtElement one = ExtElement::scalar(ring, Rat(1));
  for (int trial = 0; trial < 12; ++trial) {
    ExtElement x = random_element(rng, ring, 3);
    ExtElement y = random_element(rng, ring, 3);
    ExtElement z = random_element(rng, ring, 3);
    CHECK((x * y).equals_exact(y * x));
    CHECK(((x * y) * z).equals_exact(x * (y * z)));
    CHECK(((x + y) * z).equals_exact(x * z + y * z));
    CHECK((x * one).equals_exact(x));
    CHECK(x.trace() .equals_exact((x + y).trace() - y.trace()));
    CHECK((x * y).norm().equals_exact(x.norm() * y.norm()));
  }
  HSeries s = random_series(rng, pr, 3);
  CHECK(ExtElement::scalar(ring, s).trace().equals_exact(s * Rat(3)));
  CHECK(ExtElement::scalar(ring, s).norm().equals_exact(s.pow(3)));
}

TEST_CASE("norm agrees with the resultant") {
  auto pr = P(1, 12);  // constants only
  auto ring = sextic_at(pr, 7);
  QPoly w{5, -7, 55, -60, 35, -10, 1};
  std::mt19937 rng(9);
  std::uniform_int_distribution<long> coeff(-6, 6);
  for (int trial = 0; trial < 12; ++trial) {
    QPoly xq(6);
    std::vector<HSeries> coords;
    for (int k = 0; k < 6; ++k) {
      xq[static_cast<size_t>(k)] = coeff(rng);
      coords.push_back(HSeries::constant(pr, xq[static_cast<size_t>(k)]));
    }
    qtrim(xq);
    if (xq.empty()) continue;
    ExtElement x(ring, coords);
    // For monic w, the norm of x(theta) is the product of x over the roots
    // of w, which is exactly Res(w, x).
    CHECK(x.norm().coeff(0) == qresultant(w, xq));
  }
}

TEST_CASE("trace of theta powers matches Newton's identities") {
  auto pr = P();
  auto ring = sextic_ring(pr);
  // w = theta^6 - e1 theta^5 + e2 theta^4 - ... + e6 with
  // e = (10, 35, 60, 55, h, 5).
  std::vector<HSeries> e{cst(pr, 10), cst(pr, 35), cst(pr, 60),
                         cst(pr, 55), HSeries::h(pr), cst(pr, 5)};
  std::vector<HSeries> psum{cst(pr, 6)};  // p_0 = rank
  for (int k = 1; k <= 8; ++k) {
    HSeries pk = HSeries::zero(pr);
    for (int i = 1; i < k; ++i) {
      if (i > 6) break;
      HSeries term = e[static_cast<size_t>(i - 1)] * psum[static_cast<size_t>(k - i)];
      pk = (i % 2 == 1) ? pk + term : pk - term;
    }
    if (k <= 6) {
      HSeries last = e[static_cast<size_t>(k - 1)] * Rat(k);
      pk = (k % 2 == 1) ? pk + last : pk - last;
    }
    psum.push_back(pk);
  }
  ExtElement th = ExtElement::theta(ring);
  for (int k = 0; k <= 8; ++k) CHECK(th.pow(k).trace().equals_exact(psum[static_cast<size_t>(k)]));
}

TEST_CASE("companion element") {
  auto pr = P();
  std::mt19937 rng(13);
  // theta * theta~ = m_0 identically, for arbitrary moduli.
  for (int rank = 1; rank <= 5; ++rank) {
    std::vector<HSeries> m;
    for (int k = 0; k < rank; ++k) m.push_back(random_series(rng, pr, 3));
    auto ring = std::make_shared<ExtRing>(pr, m);
    ExtElement prod = ExtElement::theta(ring) * ext_dual(ring);
    CHECK(prod.is_scalar());
    CHECK(prod.coord(0).equals_exact(m[0].with_truncation(pr.L)));
  }
}

TEST_CASE("companion element in the sextic ring") {
  auto pr = P();
  auto ring = sextic_ring(pr);
  ExtElement alpha = ExtElement::theta(ring);
  ExtElement dual = ext_dual(ring);
  CHECK((alpha * dual).coord(0).equals_exact(cst(pr, 5)));
  CHECK(alpha.trace().equals_exact(cst(pr, 10)));
  CHECK(alpha.norm().equals_exact(cst(pr, 5)));
  CHECK(dual.norm().equals_exact(cst(pr, 5).pow(5)));
  // alpha~ = h - 55a + 60a^2 - 35a^3 + 10a^4 - a^5.
  CHECK(dual.coord(0).equals_exact(HSeries::h(pr)));
  CHECK(dual.coord(1).equals_exact(cst(pr, -55)));
  CHECK(dual.coord(5).equals_exact(cst(pr, -1)));
  auto powers = dual_power_expansion(ring, 6);
  CHECK(powers[0].equals_exact(ExtElement::scalar(ring, Rat(1))));
  CHECK(powers[1].equals_exact(dual));
  CHECK(powers[5].equals_exact(dual.pow(5)));
}

TEST_CASE("one-step reduction and difference of squares") {
  auto pr = P();
  auto ring = sextic_ring(pr);
  ExtElement alpha = ExtElement::theta(ring);
  // alpha * alpha^5 = -(w5 a^5 + ... + w1 a + w0).
  ExtElement lhs = alpha * alpha.pow(5);
  CHECK(lhs.coord(5).equals_exact(cst(pr, 10)));
  CHECK(lhs.coord(4).equals_exact(cst(pr, -35)));
  CHECK(lhs.coord(1).equals_exact(HSeries::h(pr)));
  CHECK(lhs.coord(0).equals_exact(cst(pr, -5)));
  ExtElement one = ExtElement::scalar(ring, Rat(1));
  ExtElement prod = (one + alpha) * (one - alpha);
  CHECK(prod.equals_exact(one - alpha * alpha));
}

TEST_CASE("companion powers against powers of the base constant") {
  auto pr = P();
  auto ring = sextic_ring(pr);
  ExtElement alpha = ExtElement::theta(ring);
  auto duals = dual_power_expansion(ring, 6);
  for (int tau = 0; tau <= 5; ++tau) {
    ExtElement lhs = duals[static_cast<size_t>(tau)] * alpha.pow(tau);
    CHECK(lhs.is_scalar());
    CHECK(lhs.coord(0).equals_exact(cst(pr, 1) * pow_rat(Rat(5), tau)));
  }
}

TEST_CASE("inverse") {
  auto pr = P(12, 12);
  auto ring = sextic_ring(pr);
  std::mt19937 rng(21);
  const ExtElement one = ExtElement::scalar(ring, Rat(1));
  for (int trial = 0; trial < 6; ++trial) {
    // 1 + h * (random) is a unit: its norm is 1 mod (p, h).
    ExtElement x = one + random_element(rng, ring, 4).scale(HSeries::h(pr));
    CHECK((x * x.inverse()).equals_exact(one));
  }
  // theta has norm 5, not a unit.
  CHECK_THROWS_AS(ExtElement::theta(ring).inverse(), Error);
  // Rank-1 fallback.
  auto r1 = std::make_shared<ExtRing>(pr, std::vector<HSeries>{cst(pr, -3)});
  ExtElement y = ExtElement::theta(r1);
  CHECK((y * y.inverse()).coord(0).equals_exact(cst(pr, 1)));
}

TEST_CASE("scalar predicates and printing") {
  auto pr = P();
  auto ring = sextic_ring(pr);
  ExtElement s = ExtElement::scalar(ring, HSeries::h(pr));
  CHECK(s.is_scalar());
  CHECK_FALSE(ExtElement::theta(ring).is_scalar());
  CHECK(ExtElement::zero(ring).is_zero());
  CHECK(ExtElement::theta(ring).to_string() == "(1)*alpha");
  ExtElement x(ring, {cst(pr, 2), HSeries::h(pr)});
  CHECK(x.to_string() == "(2) + (h)*alpha");
  CHECK(ExtElement::zero(ring).to_string() == "0");
}

TEST_CASE("elements of different rings do not mix") {
  auto pr = P();
  auto r1 = sextic_ring(pr);
  auto r2 = sextic_ring(pr);  // structurally equal but a distinct ring object
  CHECK_THROWS_AS(ExtElement::theta(r1) * ExtElement::theta(r2), Error);
}

#include "curve_lab.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <utility>

namespace heckeops {

namespace {

// Polynomials in x with BiPoly coefficients, dense, low to high.
using XPoly = std::vector<BiPoly>;

XPoly xp_trim(XPoly v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
  return v;
}

XPoly xp_add(const XPoly& a, const XPoly& b) {
  XPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] = out[i] + b[i];
  return xp_trim(std::move(out));
}

XPoly xp_sub(const XPoly& a, const XPoly& b) {
  XPoly out(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] = out[i] - b[i];
  return xp_trim(std::move(out));
}

XPoly xp_mul(const XPoly& a, const XPoly& b) {
  if (a.empty() || b.empty()) return {};
  XPoly out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  }
  return xp_trim(std::move(out));
}

XPoly xp_reduced_mod(const XPoly& a, const Int& p) {
  XPoly out;
  out.reserve(a.size());
  for (const BiPoly& c : a) out.push_back(c.reduced_mod(p));
  return xp_trim(std::move(out));
}

}  // namespace

BiPoly WeierstrassModel::b2() const { return a1 * a1 + a2.scale(4); }
BiPoly WeierstrassModel::b4() const { return a4.scale(2) + a1 * a3; }
BiPoly WeierstrassModel::b6() const { return a3 * a3 + a6.scale(4); }

BiPoly WeierstrassModel::b8() const {
  return a1 * a1 * a6 + (a2 * a6).scale(4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}

BiPoly WeierstrassModel::discriminant() const {
  BiPoly B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  return -(B2 * B2 * B8) - (B4 * B4 * B4).scale(8) - (B6 * B6).scale(27) +
         (B2 * B4 * B6).scale(9);
}

WeierstrassModel weierstrass_c4() {
  WeierstrassModel m;
  m.name = "c4";
  m.level = 4;
  m.a1 = BiPoly::A();
  m.a2 = BiPoly::B();
  m.a3 = BiPoly::A() * BiPoly::B();
  return m;
}

WeierstrassModel weierstrass_c5() {
  WeierstrassModel m;
  m.name = "c5";
  m.level = 5;
  BiPoly amb = BiPoly::A() - BiPoly::B();
  m.a1 = BiPoly::A();
  m.a2 = BiPoly::B() * amb;
  m.a3 = BiPoly::B() * BiPoly::B() * amb;
  return m;
}

BiPoly hasse_invariant(const WeierstrassModel& model, const Int& p) {
  if (p < 5) fail(ErrorCode::invalid_argument, "hasse_invariant needs p >= 5");
  int e = ((p.convert_to<int>()) - 1) / 2;
  BiPoly B2 = model.b2(), B4 = model.b4(), B6 = model.b6();
  BiPoly c4 = B2 * B2 - B4.scale(24);
  BiPoly c6 = -(B2 * B2 * B2) + (B2 * B4).scale(36) - B6.scale(216);
  // y^2 = x^3 - 27 c4 x - 54 c6 is a short form of the same curve; the
  // coefficient of x^{p-1} in the half-power of the cubic only moves by a
  // (p-1)-st power of a unit under the change of model, which is 1 mod p.
  XPoly f = {c6.scale(-54).reduced_mod(p), c4.scale(-27).reduced_mod(p), BiPoly(),
             BiPoly::constant(1)};
  XPoly acc = {BiPoly::constant(1)};
  for (int i = 0; i < e; ++i) acc = xp_reduced_mod(xp_mul(acc, f), p);
  BiPoly out;
  if (acc.size() > static_cast<size_t>(p.convert_to<int>() - 1))
    out = acc[static_cast<size_t>(p.convert_to<int>() - 1)];
  return out.reduced_mod(p);
}

std::vector<BiPoly> division_polynomial(const WeierstrassModel& model, int m) {
  if (m < 1 || m > 7) fail(ErrorCode::invalid_argument, "division_polynomial expects 1 <= m <= 7");
  BiPoly B2 = model.b2(), B4 = model.b4(), B6 = model.b6(), B8 = model.b8();
  // S = psi_2^2 as a polynomial in x.
  XPoly S = {B6, B4.scale(2), B2, BiPoly::constant(4)};
  // fh[m] is psi_m for odd m and psi_m / psi_2 for even m; both are y-free.
  std::vector<XPoly> fh(8);
  fh[0] = {};
  fh[1] = {BiPoly::constant(1)};
  fh[2] = {BiPoly::constant(1)};
  fh[3] = {B8, B6.scale(3), B4.scale(3), B2, BiPoly::constant(3)};
  fh[4] = {B4 * B8 - B6 * B6, B2 * B8 - B4 * B6, B8.scale(10), B6.scale(10),
           B4.scale(5),       B2,               BiPoly::constant(2)};
  auto cube = [](const XPoly& a) { return xp_mul(a, xp_mul(a, a)); };
  auto sq = [](const XPoly& a) { return xp_mul(a, a); };
  XPoly S2 = sq(S);
  // m = 5 and 7 from the odd-index doubling rule, 6 from the even-index one.
  fh[5] = xp_sub(xp_mul(S2, xp_mul(fh[4], cube(fh[2]))), xp_mul(fh[1], cube(fh[3])));
  fh[6] = xp_mul(fh[3], xp_sub(xp_mul(fh[5], sq(fh[2])), xp_mul(fh[1], sq(fh[4]))));
  fh[7] = xp_sub(xp_mul(fh[5], cube(fh[3])), xp_mul(S2, xp_mul(fh[2], cube(fh[4]))));
  if (m % 2 == 1) return fh[m];
  return xp_mul(fh[m], S);
}

namespace {

template <class R>
Int nearest_int(const R& x) {
  R shifted = (x < 0) ? R(x - R(0.5)) : R(x + R(0.5));
  return shifted.template convert_to<Int>();
}

template <class C>
std::optional<std::vector<C>> durand_kerner(std::vector<C> cs,
                                            const typename C::value_type& eps) {
  using R = typename C::value_type;
  int n = static_cast<int>(cs.size()) - 1;
  C lead = cs.back();
  for (C& c : cs) c /= lead;
  std::vector<C> x(static_cast<size_t>(n));
  C seed(R("0.4"), R("0.9"));
  C cur = seed;
  for (int k = 0; k < n; ++k) {
    x[k] = cur;
    cur *= seed;
  }
  for (int it = 0; it < 600; ++it) {
    R worst(0);
    for (int k = 0; k < n; ++k) {
      C val = cs[n];
      for (int d = n - 1; d >= 0; --d) val = val * x[k] + cs[d];
      C den(R(1), R(0));
      for (int j = 0; j < n; ++j)
        if (j != k) den *= (x[k] - x[j]);
      C dx = val / den;
      x[k] -= dx;
      R step = abs(dx);
      if (step > worst) worst = step;
    }
    if (worst < eps) return x;
  }
  return std::nullopt;
}

// One full numeric pass at a fixed complex precision. psi holds the
// specialized division-polynomial coefficients, bv = (b2, b4, b6, b8) and
// av = (a2, a4, a6) the specialized curve invariants. Returns nullopt when
// root finding or orbit pairing fails to resolve, so the caller can retry
// at higher precision.
template <class C>
std::optional<std::vector<C>> kappa_attempt(const std::vector<Rat>& psi,
                                            const std::array<Rat, 4>& bv,
                                            const std::array<Rat, 3>& av, int orbit_len,
                                            int orbit_count, const char* eps_str,
                                            const char* pair_tol_str) {
  using R = typename C::value_type;
  const R eps(eps_str), pair_tol(pair_tol_str);
  std::vector<C> cs;
  cs.reserve(psi.size());
  for (const Rat& q : psi) cs.emplace_back(q.template convert_to<R>());
  auto roots_opt = durand_kerner<C>(std::move(cs), eps);
  if (!roots_opt) return std::nullopt;
  std::vector<C>& roots = *roots_opt;
  const int n = static_cast<int>(roots.size());

  R b2 = bv[0].convert_to<R>(), b4 = bv[1].convert_to<R>(), b6 = bv[2].convert_to<R>(),
    b8 = bv[3].convert_to<R>();
  R a2 = av[0].convert_to<R>(), a4 = av[1].convert_to<R>(), a6 = av[2].convert_to<R>();

  auto dup = [&](const C& x) {
    C num = ((x * x) * (x * x)) - C(b4) * (x * x) - C(2 * b6) * x - C(b8);
    C den = C(4) * (x * x * x) + C(b2) * (x * x) + C(2 * b4) * x + C(b6);
    return num / den;
  };
  auto nearest = [&](const C& v, int* idx) {
    R best(-1);
    for (int j = 0; j < n; ++j) {
      R d = abs(v - roots[j]);
      if (best < 0 || d < best) {
        best = d;
        *idx = j;
      }
    }
    return best;
  };

  std::vector<char> taken(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> orbits;
  for (int start = 0; start < n; ++start) {
    if (taken[start]) continue;
    std::vector<int> orbit = {start};
    taken[start] = 1;
    int j = start;
    for (;;) {
      C img = dup(roots[j]);
      int k = -1;
      R d = nearest(img, &k);
      R scale = abs(img);
      if (scale < R(1)) scale = R(1);
      if (d > pair_tol * scale) return std::nullopt;
      if (k == start) break;
      if (taken[k]) return std::nullopt;
      orbit.push_back(k);
      taken[k] = 1;
      j = k;
    }
    if (static_cast<int>(orbit.size()) != orbit_len) return std::nullopt;
    orbits.push_back(std::move(orbit));
  }
  if (static_cast<int>(orbits.size()) != orbit_count) return std::nullopt;

  std::vector<C> kappas;
  kappas.reserve(orbits.size());
  for (const auto& orbit : orbits) {
    C prod(R(1), R(0));
    for (int j : orbit) {
      const C& x = roots[j];
      // The two y-values above x multiply to -(x^3 + a2 x^2 + a4 x + a6),
      // so the +/- point pair contributes x^2 over that product.
      C ynorm = -(x * x * x + C(a2) * (x * x) + C(a4) * x + C(a6));
      prod *= (x * x) / ynorm;
    }
    kappas.push_back(prod);
  }
  std::sort(kappas.begin(), kappas.end(), [](const C& l, const C& r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
  return kappas;
}

struct SpecializedCurve {
  std::vector<Rat> psi;
  std::array<Rat, 4> bv;
  std::array<Rat, 3> av;
  int orbit_len = 0;
  int orbit_count = 0;
};

SpecializedCurve specialize_curve(const WeierstrassModel& model, const Int& p, const Rat& A0,
                                  const Rat& B0) {
  if (p != 5 && p != 7) fail(ErrorCode::unsupported, "numeric kappas support p = 5 or 7");
  if (model.level > 0 && Int(model.level) % p == 0)
    fail(ErrorCode::invalid_argument, "prime must be coprime to the level");
  if (model.discriminant().eval(A0, B0) == 0)
    fail(ErrorCode::invalid_argument, "singular specialization");
  SpecializedCurve sc;
  int pi = p.convert_to<int>();
  sc.orbit_len = (pi - 1) / 2;
  sc.orbit_count = pi + 1;
  std::vector<BiPoly> psi = division_polynomial(model, pi);
  int expect_deg = (pi * pi - 1) / 2;
  if (static_cast<int>(psi.size()) != expect_deg + 1)
    fail(ErrorCode::internal, "division polynomial has unexpected degree");
  sc.psi.reserve(psi.size());
  for (const BiPoly& c : psi) sc.psi.push_back(c.eval(A0, B0));
  if (sc.psi.back() != Rat(p)) fail(ErrorCode::internal, "division polynomial not p-led");
  sc.bv = {model.b2().eval(A0, B0), model.b4().eval(A0, B0), model.b6().eval(A0, B0),
           model.b8().eval(A0, B0)};
  sc.av = {model.a2.eval(A0, B0), model.a4.eval(A0, B0), model.a6.eval(A0, B0)};
  return sc;
}

}  // namespace

std::vector<Complex100> numeric_kappas(const WeierstrassModel& model, const Int& p,
                                       const Rat& A0, const Rat& B0) {
  SpecializedCurve sc = specialize_curve(model, p, A0, B0);
  if (auto r = kappa_attempt<Complex100>(sc.psi, sc.bv, sc.av, sc.orbit_len, sc.orbit_count,
                                         "1e-80", "1e-30"))
    return *r;
  using C200 = boost::multiprecision::cpp_complex<200>;
  if (auto r = kappa_attempt<C200>(sc.psi, sc.bv, sc.av, sc.orbit_len, sc.orbit_count, "1e-160",
                                   "1e-60")) {
    std::vector<Complex100> out;
    out.reserve(r->size());
    for (const C200& z : *r)
      out.emplace_back(z.real().convert_to<Complex100::value_type>(),
                       z.imag().convert_to<Complex100::value_type>());
    return out;
  }
  using C400 = boost::multiprecision::cpp_complex<400>;
  if (auto r = kappa_attempt<C400>(sc.psi, sc.bv, sc.av, sc.orbit_len, sc.orbit_count, "1e-320",
                                   "1e-120")) {
    std::vector<Complex100> out;
    out.reserve(r->size());
    for (const C400& z : *r)
      out.emplace_back(z.real().convert_to<Complex100::value_type>(),
                       z.imag().convert_to<Complex100::value_type>());
    return out;
  }
  fail(ErrorCode::precision, "kappa orbits did not resolve at any supported precision");
}

namespace {

// Exact solve of an overdetermined full-rank rational system; every row must
// be consistent with the unique solution.
std::vector<Rat> solve_exact(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs, int u) {
  int rows = static_cast<int>(m.size());
  if (rows < u) fail(ErrorCode::internal, "reconstruction system underdetermined");
  for (int col = 0; col < u; ++col) {
    int pr = -1;
    for (int r = col; r < rows; ++r)
      if (m[r][col] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) fail(ErrorCode::internal, "reconstruction system rank-deficient");
    std::swap(m[col], m[pr]);
    std::swap(rhs[col], rhs[pr]);
    for (int r = 0; r < rows; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (int c = col; c < u; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = u; r < rows; ++r)
    if (rhs[r] != 0) fail(ErrorCode::verify, "inconsistent numeric samples in reconstruction");
  std::vector<Rat> x(static_cast<size_t>(u));
  for (int k = 0; k < u; ++k) x[static_cast<size_t>(k)] = rhs[k] / m[k][k];
  return x;
}

using R100 = Complex100::value_type;

std::vector<Complex100> poly_from_roots(const std::vector<Complex100>& roots) {
  std::vector<Complex100> cs = {Complex100(1)};
  for (const Complex100& r : roots) {
    std::vector<Complex100> next(cs.size() + 1);
    for (size_t j = 0; j < cs.size(); ++j) {
      next[j + 1] += cs[j];
      next[j] -= r * cs[j];
    }
    cs = std::move(next);
  }
  return cs;  // low to high, monic
}

}  // namespace

KappaPolynomial reconstruct_kappa_polynomial(const WeierstrassModel& model, const Int& p) {
  int pi = p.convert_to<int>();
  int r = pi + 1;
  int e_den = (pi - 1) * (pi + 1) / 2;

  // Per-coefficient ansatz: the kappa^i coefficient times B^e_den is
  // weighted-homogeneous of weight (p-1)*i, spanned by A^s B^{(w-s)/2}.
  std::vector<std::vector<std::pair<int, int>>> monos(static_cast<size_t>(r));
  int total_unknowns = 0;
  for (int i = 0; i < r; ++i) {
    int w = (pi - 1) * i;
    for (int s = w % 2; s <= w; s += 2) monos[static_cast<size_t>(i)].push_back({s, (w - s) / 2});
    total_unknowns += static_cast<int>(monos[static_cast<size_t>(i)].size());
  }
  int n_grid = 3 * total_unknowns;
  int n_holdout = 2;

  BiPoly disc = model.discriminant();
  std::vector<std::pair<int, int>> points;
  for (int a = 1; static_cast<int>(points.size()) < n_grid + n_holdout; ++a) {
    for (int b = 1; b <= 9 && static_cast<int>(points.size()) < n_grid + n_holdout; ++b) {
      if (disc.eval(a, b) == 0) continue;
      points.push_back({a, b});
    }
    if (a > 1000) fail(ErrorCode::internal, "could not collect enough sample points");
  }

  const R100 tol_round("1e-20"), tol_holdout("1e-40");
  // samples[point][i] = rounded integer value of (coeff of kappa^i) * B^e_den
  std::vector<std::vector<Int>> samples;
  std::vector<std::vector<Complex100>> raw;
  for (const auto& [a, b] : points) {
    std::vector<Complex100> ks = numeric_kappas(model, p, Rat(a), Rat(b));
    std::vector<Complex100> cs = poly_from_roots(ks);
    Rat scale_q = pow_rat(Rat(b), e_den);
    R100 scale = scale_q.convert_to<R100>();
    std::vector<Int> row(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
      Complex100 v = cs[static_cast<size_t>(i)] * Complex100(scale);
      R100 mag = abs(v);
      if (mag < R100(1)) mag = R100(1);
      if (abs(v.imag()) > tol_round * mag)
        fail(ErrorCode::precision, "sampled coefficient is not real to working accuracy");
      Int n = nearest_int(v.real());
      if (abs(v.real() - n.convert_to<R100>()) > tol_round * mag)
        fail(ErrorCode::precision, "sampled coefficient is not integral to working accuracy");
      row[static_cast<size_t>(i)] = n;
    }
    samples.push_back(std::move(row));
    raw.push_back(std::move(cs));
  }

  KappaPolynomial K;
  K.p = p;
  K.level = model.level;
  K.coeffs.resize(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    const auto& ms = monos[static_cast<size_t>(i)];
    int u = static_cast<int>(ms.size());
    std::vector<std::vector<Rat>> mat;
    std::vector<Rat> rhs;
    for (int g = 0; g < n_grid; ++g) {
      const auto& [a, b] = points[static_cast<size_t>(g)];
      std::vector<Rat> row;
      row.reserve(static_cast<size_t>(u));
      for (const auto& [s, t] : ms) row.push_back(pow_rat(Rat(a), s) * pow_rat(Rat(b), t));
      mat.push_back(std::move(row));
      rhs.push_back(Rat(samples[static_cast<size_t>(g)][static_cast<size_t>(i)]));
    }
    std::vector<Rat> sol = solve_exact(std::move(mat), std::move(rhs), u);
    BiPoly num;
    for (int k = 0; k < u; ++k) {
      if (den(sol[static_cast<size_t>(k)]) != 1)
        fail(ErrorCode::verify, "reconstructed coefficient is not integral");
      num = num + BiPoly::monomial(ms[static_cast<size_t>(k)].first,
                                   ms[static_cast<size_t>(k)].second,
                                   sol[static_cast<size_t>(k)]);
    }
    KappaPolynomial::Coeff& out = K.coeffs[static_cast<size_t>(i)];
    if (num.is_zero()) {
      out.numerator = num;
      out.b_exp = 0;
    } else {
      int bd = num.b_divisibility();
      out.numerator = num.div_b_power(bd);
      out.b_exp = e_den - bd;
    }
    // Held-out points confirm the exact form against fresh numerics.
    for (int g = n_grid; g < n_grid + n_holdout; ++g) {
      const auto& [a, b] = points[static_cast<size_t>(g)];
      Rat exact = out.numerator.eval(a, b) / pow_rat(Rat(b), out.b_exp);
      R100 target = exact.convert_to<R100>();
      R100 mag = abs(target);
      if (mag < R100(1)) mag = R100(1);
      Complex100 got = raw[static_cast<size_t>(g)][static_cast<size_t>(i)];
      if (abs(got - Complex100(target)) > tol_holdout * mag)
        fail(ErrorCode::verify, "held-out sample disagrees with reconstruction");
    }
  }
  K.weight_audit();
  return K;
}

void KappaPolynomial::weight_audit() const {
  int pi = p.convert_to<int>();
  if (static_cast<int>(coeffs.size()) != pi + 1)
    fail(ErrorCode::model, "subgroup polynomial has wrong coefficient count");
  for (int i = 0; i <= pi; ++i) {
    const Coeff& c = coeffs[static_cast<size_t>(i)];
    if (c.numerator.is_zero()) continue;
    long w = 0;
    if (!c.numerator.weighted_homogeneous(1, 2, &w))
      fail(ErrorCode::model, "subgroup polynomial coefficient is not homogeneous");
    long target = -static_cast<long>(pi - 1) * (pi + 1 - i);
    if (w - 2L * c.b_exp != target)
      fail(ErrorCode::model, "subgroup polynomial coefficient has wrong weight");
  }
}

std::string KappaPolynomial::to_string() const {
  int pi = p.convert_to<int>();
  std::string s = "kappa^" + std::to_string(pi + 1);
  for (int i = pi; i >= 0; --i) {
    const Coeff& c = coeffs[static_cast<size_t>(i)];
    if (c.numerator.is_zero()) continue;
    s += " + (" + c.numerator.to_string() + ")";
    if (c.b_exp > 0) s += "/B^" + std::to_string(c.b_exp);
    if (i == 1)
      s += "*kappa";
    else if (i > 1)
      s += "*kappa^" + std::to_string(i);
  }
  return s;
}

WData specialize_to_E0(const KappaPolynomial& K, const HSeries::Params& pr) {
  int pi = K.p.convert_to<int>();
  if (pr.p != K.p) fail(ErrorCode::invalid_argument, "prime mismatch in specialization");
  if (static_cast<int>(K.coeffs.size()) != pi + 1)
    fail(ErrorCode::model, "subgroup polynomial has wrong coefficient count");
  int e_den = (pi - 1) * (pi + 1) / 2;

  // The kappa-linear coefficient is -H/B^e_den; its numerator at B = 1 is the
  // monic degree-(p-1) polynomial whose value is identified with h.
  const KappaPolynomial::Coeff& c1 = K.coeffs[1];
  if (c1.b_exp != e_den)
    fail(ErrorCode::model, "kappa-linear coefficient lacks the full denominator");
  std::vector<Rat> eta = (-c1.numerator).eval_b(1);
  if (static_cast<int>(eta.size()) != pi || eta.back() != 1)
    fail(ErrorCode::model, "h-parameter polynomial is not monic of degree p-1");

  std::vector<HSeries> modulus;
  for (int j = 0; j < pi - 1; ++j) {
    HSeries m = HSeries::constant(pr, eta[static_cast<size_t>(j)]);
    if (j == 0) m = m - HSeries::h(pr);
    modulus.push_back(m);
  }
  auto ring = std::make_shared<const ExtRing>(pr, modulus);
  ExtElement a = ExtElement::theta(ring);

  std::vector<HSeries> w;
  w.reserve(static_cast<size_t>(pi + 1));
  for (int i = 0; i <= pi; ++i) {
    std::vector<Rat> v = K.coeffs[static_cast<size_t>(i)].numerator.eval_b(1);
    ExtElement acc = ExtElement::zero(ring);
    for (int s = static_cast<int>(v.size()) - 1; s >= 0; --s)
      acc = acc * a + ExtElement::scalar(ring, v[static_cast<size_t>(s)]);
    for (int k = 1; k < pi - 1; ++k)
      if (!acc.coords()[static_cast<size_t>(k)].is_zero())
        fail(ErrorCode::model, "subgroup coefficient does not collapse into the base ring");
    w.push_back(acc.coords()[0]);
  }
  return WData(K.p, K.level, std::move(w), 1);
}

}  // namespace heckeops

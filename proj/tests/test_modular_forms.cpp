#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "modular_forms.hpp"

using namespace heckeops;

namespace {

HSeries::Params P(int L = 24, int M = 12) { return HSeries::Params{Int(5), L, M}; }

HSeries cst(const HSeries::Params& pr, long c) { return HSeries::constant(pr, c); }

WData model5(const HSeries::Params& pr) {
  std::vector<HSeries> w{cst(pr, 5),   -HSeries::h(pr), cst(pr, 55),
                         cst(pr, -60), cst(pr, 35),     cst(pr, -10)};
  return WData(Int(5), 4, std::move(w), 1);
}

const PsiData& data5() {
  static PsiData d = derive_psi_h(model5(P()));
  return d;
}

QSeries random_qseries(std::mt19937& rng, int trunc) {
  std::uniform_int_distribution<int> low(-3, 3), deg(0, 8);
  std::uniform_int_distribution<long> coeff(-9, 9);
  const int m0 = low(rng);
  std::vector<Rat> v(static_cast<size_t>(deg(rng)) + 1);
  for (Rat& c : v) c = coeff(rng);
  return QSeries(m0, std::move(v), trunc);
}

LogQSeries random_logqseries(std::mt19937& rng, int trunc) {
  std::uniform_int_distribution<int> wt(-2, 4), ord(0, 2);
  std::vector<QSeries> comps;
  const int t = ord(rng);
  for (int j = 0; j <= t; ++j) comps.push_back(random_qseries(rng, trunc));
  return LogQSeries(wt(rng), std::move(comps));
}

MFPoly random_mfpoly(std::mt19937& rng) {
  std::uniform_int_distribution<int> wt(0, 8), ex(0, 1);
  std::uniform_int_distribution<long> coeff(-9, 9);
  const int e = ex(rng);
  const int W = wt(rng) + 12 * e;
  BiPoly n;
  for (int j = 0; 2 * j <= W; ++j) n = n + BiPoly::monomial(W - 2 * j, j, coeff(rng));
  return MFPoly(n, e, W - 12 * e);
}

}  // namespace

TEST_CASE("discriminant expansion matches the divisor-sum recursion") {
  const QSeries d = delta_qexp(60);
  CHECK(d.lowest() == 1);
  CHECK(d.coeff(1) == 1);
  CHECK(d.coeff(2) == -24);
  CHECK(d.coeff(3) == 252);
  CHECK(d.coeff(4) == -1472);
  CHECK(d.coeff(5) == 4830);
  CHECK(d.truncation() == 60);

  // independent route: (n-1) tau(n) = -24 sum_{j<n} sigma_1(j) tau(n-j),
  // which is the coefficient recursion of D Delta = E2 Delta
  std::vector<Rat> tau(61);
  tau[1] = 1;
  for (long n = 2; n <= 60; ++n) {
    Rat s = 0;
    for (long j = 1; j < n; ++j) s += sigma(1, j) * tau[static_cast<size_t>(n - j)];
    tau[static_cast<size_t>(n)] = Rat(-24) * s / (n - 1);
  }
  for (int n = 1; n <= 60; ++n) CHECK(d.coeff(n) == tau[static_cast<size_t>(n)]);
}

TEST_CASE("eisenstein series and divisor sums") {
  const QSeries e2 = e2_qexp(60);
  CHECK(e2.coeff(0) == 1);
  CHECK(e2.coeff(1) == -24);
  CHECK(e2.coeff(6) == Rat(-24) * 12);
  CHECK(sigma(-1, 5) == Rat(6, 5));
  CHECK(sigma(1, 6) == 12);
  CHECK(sigma(0, 12) == 6);
  CHECK(sigma(-1, 1) == 1);

  // the multiplicative relation behind the log Delta eigenproperty
  for (long p : {2L, 3L, 5L, 7L})
    for (long m = 1; m <= 40; ++m) {
      Rat lhs = sigma(-1, p * m);
      if (m % p == 0) lhs += sigma(-1, m / p) / p;
      CHECK(lhs == sigma(-1, p) * sigma(-1, m));
    }

  try {
    sigma(1, 0);
    FAIL("expected rejection of nonpositive argument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("differential operators") {
  const QSeries q = QSeries::monomial(1, 1, 40);
  CHECK(d_operator(q) == q);

  CHECK(serre_derivative(delta_qexp(60), 12).is_zero());

  const LogQSeries dlog = d_operator(log_qexp(delta_qexp(60)));
  CHECK(dlog.weight() == 2);
  CHECK(dlog.order() == 0);
  CHECK(dlog == LogQSeries::from_qseries(2, e2_qexp(59)));

  std::mt19937 rng(7);
  for (int t = 0; t < 12; ++t) {
    const LogQSeries f = random_logqseries(rng, 48);
    for (long p : {2L, 3L}) {
      CHECK(d_operator(hecke_Tp(f, p)) == hecke_Tp(d_operator(f), p).scale(Rat(1, p)));
      CHECK(d_operator(hecke_T2p(f, p)) == hecke_T2p(d_operator(f), p).scale(Rat(1, p * p)));
    }
  }
}

TEST_CASE("hecke operators on classical expansions") {
  const QSeries d = delta_qexp(60);
  CHECK(hecke_Tp(d, 12, 5) == d.scale(4830));
  CHECK(hecke_Tp(d, 12, 2) == d.scale(-24));
  CHECK(hecke_Tp(d, 12, 5).truncation() == 12);

  const LogQSeries dl = LogQSeries::from_qseries(12, d);
  CHECK(hecke_T2p(dl, 5) == dl.scale(pow_rat(Rat(5), 10)));
  const LogQSeries w0 = LogQSeries::from_qseries(0, e2_qexp(40));
  CHECK(hecke_T2p(w0, 3) == w0.scale(Rat(1, 9)));
  CHECK(hecke_T2p(LogQSeries::log_q(40), 5) == LogQSeries::log_q(40).scale(Rat(1, 625)));

  for (long p : {2L, 3L, 5L, 7L}) {
    const LogQSeries e2 = LogQSeries::from_qseries(2, e2_qexp(56));
    CHECK(hecke_Tp(e2, p) == e2.scale(1 + p));
    // the damped combination from the constancy argument
    const LogQSeries combo =
        e2 - hecke_Tp(e2, p).scale(Rat(1, p)) + hecke_T2p(e2, p).scale(Rat(1, p));
    CHECK(combo.is_zero());
  }
}

TEST_CASE("hecke operators on logarithmic series") {
  for (long p : {2L, 3L, 5L, 7L}) {
    const LogQSeries lq = LogQSeries::log_q(60);
    const LogQSeries tp = hecke_Tp(lq, p);
    CHECK(tp == lq.scale(Rat(1, p) + Rat(1, p * p)));
    CHECK(tp.weight() == -2);

    const LogQSeries ld = log_qexp(delta_qexp(60));
    CHECK(ld.weight() == 0);
    CHECK(hecke_Tp(ld, p) == ld.scale(sigma(-1, p)));
    CHECK(f_operator(ld, p).is_zero());
  }

  const LogQSeries one = LogQSeries::from_qseries(0, QSeries::constant(1, 30));
  for (long p : {2L, 5L}) CHECK(f_operator(one, p).is_zero());

  std::mt19937 rng(11);
  const long pairs[3][2] = {{2, 3}, {2, 5}, {3, 5}};
  for (int t = 0; t < 10; ++t) {
    const LogQSeries f = random_logqseries(rng, 48);
    for (const auto& pr : pairs)
      CHECK(hecke_Tp(hecke_Tp(f, pr[0]), pr[1]) == hecke_Tp(hecke_Tp(f, pr[1]), pr[0]));
  }
}

TEST_CASE("formal logarithm of product expansions") {
  const LogQSeries ld = log_qexp(delta_qexp(60));
  CHECK(ld.order() == 1);
  CHECK(ld.comp(1) == QSeries::constant(1, 59));
  std::vector<Rat> tail;
  for (long m = 1; m <= 59; ++m) tail.push_back(Rat(-24) * sigma(-1, m));
  CHECK(ld.comp(0) == QSeries(1, std::move(tail), 59));

  CHECK(log_qexp(QSeries::constant(1, 40)).is_zero());

  // single Euler factor (1 - q^3)^24
  QSeries base = QSeries::constant(1, 60) - QSeries::monomial(3, 1, 60);
  QSeries factor = QSeries::constant(1, 60);
  for (int i = 0; i < 24; ++i) factor = (factor * base).with_truncation(60);
  const LogQSeries lf = log_qexp(factor);
  CHECK(lf.order() == 0);
  std::vector<Rat> expect;
  for (int m = 1; m <= 60; ++m) expect.push_back(m % 3 == 0 ? Rat(-24, m / 3) : Rat(0));
  CHECK(lf.comp(0) == QSeries(1, std::move(expect), 60));

  std::mt19937 rng(23);
  std::uniform_int_distribution<int> low(-2, 2), deg(1, 6);
  std::uniform_int_distribution<long> coeff(-5, 5);
  for (int t = 0; t < 10; ++t) {
    auto make_unit = [&] {
      std::vector<Rat> v{Rat(1)};
      const int extra = deg(rng);
      for (int i = 0; i < extra; ++i) v.push_back(coeff(rng));
      return QSeries(low(rng), std::move(v), 40);
    };
    const QSeries f = make_unit(), g = make_unit();
    CHECK(log_qexp(f * g) == log_qexp(f) + log_qexp(g));
  }

  try {
    log_qexp(delta_qexp(20).scale(2));
    FAIL("expected rejection of leading coefficient 2");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("chart substitution into the base ring") {
  const HSeries::Params pr = P();
  const WData model = model5(pr);

  const BetaImage bd = beta(MFPoly::discriminant(), model);
  CHECK(bd.in_base);
  CHECK(bd.base_value.equals_exact(HSeries(pr, {Rat(-26), Rat(1)})));

  const BetaImage bb = beta(MFPoly::gen_B(), model);
  CHECK(bb.in_base);
  CHECK(bb.base_value.equals_exact(cst(pr, 1)));

  const BetaImage bh = beta(MFPoly::hasse_lift(), model);
  CHECK(bh.in_base);
  CHECK(bh.base_value.equals_exact(HSeries::h(pr)));

  const BetaImage ba = beta(MFPoly::gen_A(), model);
  CHECK_FALSE(ba.in_base);
  CHECK(ba.value.equals_exact(ExtElement::theta(ba.value.ring())));

  const BetaImage binv = beta(MFPoly::discriminant_inverse(), model);
  CHECK(binv.in_base);
  CHECK((bd.value * binv.value).equals_exact(ExtElement::scalar(bd.value.ring(), Rat(1))));

  CHECK(MFPoly::discriminant() * MFPoly::discriminant_inverse() == MFPoly::constant(1));

  std::mt19937 rng(31);
  for (int t = 0; t < 20; ++t) {
    const MFPoly f = random_mfpoly(rng), g = random_mfpoly(rng);
    const BetaImage bf = beta(f, model), bg = beta(g, model), bfg = beta(f * g, model);
    CHECK(bfg.value.equals_exact(bf.value * bg.value));
  }

  try {
    beta(MFPoly::gen_B(), WData(Int(5), 3, model.w(), 1));
    FAIL("expected rejection of a non level-4 model");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
}

TEST_CASE("kernel membership of discriminant powers and units") {
  const KernelReport r1 = kernel_check(data5(), MFPoly::discriminant());
  CHECK(r1.in_kernel);
  CHECK(r1.value.is_zero());
  CHECK(r1.first_nonzero == -1);
  CHECK(r1.summary.find("zero") != std::string::npos);

  CHECK(kernel_check(data5(), MFPoly::discriminant().pow(2)).in_kernel);
  CHECK(kernel_check(data5(), MFPoly::gen_B()).in_kernel);
  CHECK(kernel_check(data5(), MFPoly::discriminant_inverse()).in_kernel);
  CHECK(kernel_check(data5(), MFPoly::discriminant().scale(2)).in_kernel);

  try {
    kernel_check(data5(), MFPoly::gen_A());
    FAIL("expected rejection outside the base ring");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
}

TEST_CASE("cusp leading constants") {
  CHECK(cusp_leading_constant(1, 2) == -1);
  CHECK(cusp_leading_constant(1, 5) == 1);
  CHECK(cusp_leading_constant(0, 2) == 1);
  CHECK(cusp_leading_constant(0, 7) == 1);
  CHECK(cusp_leading_constant(2, 2) == 1);
  CHECK(cusp_leading_constant(3, 2) == -1);
  CHECK(cusp_leading_constant(4, 3) == 1);
}

TEST_CASE("q-series arithmetic and truncation bookkeeping") {
  const QSeries f(-1, {Rat(1), Rat(1)}, 10);  // q^{-1} + 1
  const QSeries g(1, {Rat(1), Rat(-1)}, 10);  // q - q^2
  const QSeries fg = f * g;
  CHECK(fg.lowest() == 0);
  CHECK(fg.coeff(0) == 1);
  CHECK(fg.coeff(1) == 0);
  CHECK(fg.coeff(2) == -1);
  CHECK(fg.truncation() == 9);

  CHECK(QSeries(0, {Rat(0), Rat(0)}, 5).is_zero());
  CHECK(QSeries(2, {Rat(0), Rat(3)}, 5).lowest() == 3);

  // equality compares through the smaller stated truncation
  CHECK(delta_qexp(60).with_truncation(12) == delta_qexp(30));
  CHECK(QSeries::constant(1, 5) != QSeries::constant(2, 5));

  try {
    fg.coeff(10);
    FAIL("expected rejection above the truncation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precision);
  }
  try {
    fg.with_truncation(20);
    FAIL("expected rejection of truncation extension");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precision);
  }

  CHECK(e2_qexp(2).to_string() == "1 - 24*q - 72*q^2 + O(q^3)");

  try {
    MFPoly(BiPoly::A() + BiPoly::B(), 0, 1);
    FAIL("expected homogeneity rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
  const LogQSeries mixed = LogQSeries::log_q(20);
  try {
    (void)(mixed + LogQSeries::from_qseries(3, e2_qexp(20)));
    FAIL("expected weight mismatch rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

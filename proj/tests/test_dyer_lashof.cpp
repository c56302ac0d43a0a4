#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <vector>

#include "dyer_lashof.hpp"

using namespace heckeops;

namespace {

HSeries::Params P(int L = 24, int M = 12) { return HSeries::Params{Int(5), L, M}; }

HSeries cst(const HSeries::Params& pr, long c) { return HSeries::constant(pr, c); }

HSeries poly(const HSeries::Params& pr, std::vector<long> cs) {
  std::vector<Rat> v(cs.begin(), cs.end());
  return HSeries(pr, std::move(v));
}

WData model5(const HSeries::Params& pr) {
  std::vector<HSeries> w{cst(pr, 5),   -HSeries::h(pr), cst(pr, 55),
                         cst(pr, -60), cst(pr, 35),     cst(pr, -10)};
  return WData(Int(5), 4, std::move(w), 1);
}

const PsiData& data5() {
  static PsiData d = derive_psi_h(model5(P()));
  return d;
}

const GammaPresentation& pres5() {
  static GammaPresentation g(data5());
  return g;
}

GammaWord W(std::vector<int> g) { return GammaWord{std::move(g)}; }

HSeries random_series(std::mt19937& rng, const HSeries::Params& pr, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long> coeff(-9, 9);
  std::vector<Rat> v(static_cast<size_t>(deg(rng)) + 1);
  for (Rat& c : v) c = coeff(rng);
  return HSeries(pr, std::move(v));
}

// published commutation matrix C[k][j], low h-degree first
const std::vector<std::vector<std::vector<long>>> comm_golden = {
    {{-1462250, 168930, 12690, -1065, -10, 1},
     {233400, 42200, -3950, -50, 5},
     {104750, -12875, -250, 25},
     {-30000, -1250, 125},
     {-6250, 625},
     {3120}},
    {{-1113524, -608700, 39575, 850, -55},
     {-1462250, 122250, 4250, -275},
     {233400, 21250, -1375},
     {104750, -6875},
     {-30000},
     {-6250, 1}},
    {{2008800, 593900, -45400, -775, 60},
     {1453876, -144500, -3875, 300},
     {-310000, -19375, 1500},
     {-96600, 7500},
     {36000},
     {4320}},
    {{-1418300, -320900, 27125, 400, -35},
     {-792000, 87500, 2000, -175},
     {196876, 10000, -875},
     {50000, -4375},
     {-21600},
     {-1440}},
    {{445850, 86975, -7850, -105, 10},
     {215500, -25500, -525, 50},
     {-58750, -2625, 250},
     {-13124, 1250},
     {6250},
     {240}},
    {{-46680, -8440, 790, 10, -1},
     {-20950, 2575, 50, -5},
     {6000, 250, -25},
     {1250, -125},
     {-624},
     {10}},
};

struct AdemEntry {
  int i;
  int j;
  std::vector<long> c;
};

// published right-hand sides of Q_k Q_0
const std::map<int, std::vector<AdemEntry>> adem_golden = {
    {1,
     {{0, 1, {55}},
      {0, 2, {-300, 55}},
      {0, 3, {-14250, -300, 55}},
      {0, 4, {163750, -29375, -300, 55}},
      {0, 5, {3228750, 328750, -44500, -300, 55}},
      {1, 2, {275}},
      {1, 3, {-1500, 275}},
      {1, 4, {-71250, -1500, 275}},
      {1, 5, {818750, -146875, -1500, 275}},
      {2, 1, {-5}},
      {2, 3, {1375}},
      {2, 4, {-7500, 1375}},
      {2, 5, {-356250, -7500, 1375}},
      {3, 2, {-25}},
      {3, 4, {6875}},
      {3, 5, {-37500, 6875}},
      {4, 3, {-125}},
      {4, 5, {34375}},
      {5, 4, {-625}}}},
    {2,
     {{0, 1, {-60}},
      {0, 2, {175, -60}},
      {0, 3, {16250, 175, -60}},
      {0, 4, {-138000, 32750, 175, -60}},
      {0, 5, {-3943750, -276125, 49250, 175, -60}},
      {1, 2, {-300}},
      {1, 3, {875, -300}},
      {1, 4, {81250, 875, -300}},
      {1, 5, {-690000, 163750, 875, -300}},
      {2, 3, {-1500}},
      {2, 4, {4375, -1500}},
      {2, 5, {406250, 4375, -1500}},
      {3, 1, {-5}},
      {3, 4, {-7500}},
      {3, 5, {21875, -7500}},
      {4, 2, {-25}},
      {4, 5, {-37500}},
      {5, 3, {-125}}}},
    {3,
     {{0, 1, {35}},
      {0, 2, {-50, 35}},
      {0, 3, {-9600, -50, 35}},
      {0, 4, {66250, -19225, -50, 35}},
      {0, 5, {2411875, 132500, -28850, -50, 35}},
      {1, 2, {175}},
      {1, 3, {-250, 175}},
      {1, 4, {-48000, -250, 175}},
      {1, 5, {331250, -96125, -250, 175}},
      {2, 3, {875}},
      {2, 4, {-1250, 875}},
      {2, 5, {-240000, -1250, 875}},
      {3, 4, {4375}},
      {3, 5, {-6250, 4375}},
      {4, 1, {-5}},
      {4, 5, {21875}},
      {5, 2, {-25}}}},
    {4,
     {{0, 1, {-10}},
      {0, 2, {5, -10}},
      {0, 3, {2750, 5, -10}},
      {0, 4, {-16375, 5500, 5, -10}},
      {0, 5, {-705000, -32750, 8250, 5, -10}},
      {1, 2, {-50}},
      {1, 3, {25, -50}},
      {1, 4, {13750, 25, -50}},
      {1, 5, {-81875, 27500, 25, -50}},
      {2, 3, {-250}},
      {2, 4, {125, -250}},
      {2, 5, {68750, 125, -250}},
      {3, 4, {-1250}},
      {3, 5, {625, -1250}},
      {4, 5, {-6250}},
      {5, 1, {-5}}}},
    {5,
     {{0, 1, {1}},
      {0, 2, {0, 1}},
      {0, 3, {-275, 0, 1}},
      {0, 4, {1500, -550, 0, 1}},
      {0, 5, {71250, 3000, -825, 0, 1}},
      {1, 2, {5}},
      {1, 3, {0, 5}},
      {1, 4, {-1375, 0, 5}},
      {1, 5, {7500, -2750, 0, 5}},
      {2, 3, {25}},
      {2, 4, {0, 25}},
      {2, 5, {-6875, 0, 25}},
      {3, 4, {125}},
      {3, 5, {0, 125}},
      {4, 5, {625}}}},
};

// published Cartan coefficients, rows s = 6..10, columns k = 0..5
const std::vector<std::vector<std::vector<long>>> cartan_golden = {
    {{-5}, {0, 1}, {-55}, {60}, {-35}, {10}},
    {{-50}, {-5, 10}, {-550, 1}, {545}, {-290}, {65}},
    {{-325}, {-50, 65}, {-3580, 10}, {3350, 1}, {-1730}, {360}},
    {{-1800}, {-325, 360}, {-19850, 65}, {18020, 10}, {-9250, 1}, {1870}},
    {{-9350}, {-1800, 1870}, {-103175, 360}, {92350, 65}, {-47430, 10}, {9450, 1}},
};

// Evaluates a raw token word as a composed operation, right to left.
HSeries eval_word(PsiApplier& ap, const TokenWord& word, const HSeries& x0) {
  const HSeries::Params wp = ap.params();
  HSeries x = x0.with_truncation(wp.L).with_pprec(wp.M);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (it->is_gen)
      x = ap.apply(x).coord(it->gen);
    else
      x = x * it->scalar.with_truncation(wp.L).with_pprec(wp.M);
  }
  return x;
}

// All compositions Q_a, Q_a Q_b, Q_a Q_b Q_c applied to one input, so normal
// forms can be evaluated by lookup. tab2[b][a] = Q_a Q_b x and so on.
struct QTable {
  HSeries x;
  std::vector<HSeries> tab1;
  std::vector<std::vector<HSeries>> tab2;
  std::vector<std::vector<std::vector<HSeries>>> tab3;
};

QTable build_qtable(PsiApplier& ap, const HSeries& x0, int depth) {
  const HSeries::Params wp = ap.params();
  QTable t;
  t.x = x0.with_truncation(wp.L).with_pprec(wp.M);
  auto coords = [&](const HSeries& v) {
    const ExtElement e = ap.apply(v);
    std::vector<HSeries> out;
    for (int i = 0; i < 6; ++i) out.push_back(e.coord(i));
    return out;
  };
  t.tab1 = coords(t.x);
  if (depth < 2) return t;
  t.tab2.resize(6);
  for (int b = 0; b < 6; ++b) t.tab2[static_cast<size_t>(b)] = coords(t.tab1[static_cast<size_t>(b)]);
  if (depth < 3) return t;
  t.tab3.resize(6);
  for (int c = 0; c < 6; ++c) {
    t.tab3[static_cast<size_t>(c)].resize(6);
    for (int b = 0; b < 6; ++b)
      t.tab3[static_cast<size_t>(c)][static_cast<size_t>(b)] =
          coords(t.tab2[static_cast<size_t>(c)][static_cast<size_t>(b)]);
  }
  return t;
}

HSeries qtable_lookup(const QTable& t, const GammaWord& w) {
  switch (w.gens.size()) {
    case 0:
      return t.x;
    case 1:
      return t.tab1[static_cast<size_t>(w.gens[0])];
    case 2:
      return t.tab2[static_cast<size_t>(w.gens[1])][static_cast<size_t>(w.gens[0])];
    default:
      return t.tab3[static_cast<size_t>(w.gens[2])][static_cast<size_t>(w.gens[1])]
                   [static_cast<size_t>(w.gens[0])];
  }
}

HSeries eval_element(const QTable& t, const GammaElement& e, const HSeries::Params& out) {
  HSeries acc = HSeries::zero(out);
  for (const auto& [w, c] : e.terms())
    acc = acc + c * qtable_lookup(t, w).with_truncation(out.L).with_pprec(out.M);
  return acc;
}

}  // namespace

TEST_CASE("commutation matrix matches the published table") {
  const HSeries::Params pr = P();
  const auto& C = pres5().commutation();
  REQUIRE(C.size() == 6);
  for (size_t k = 0; k < 6; ++k) {
    REQUIRE(C[k].size() == 6);
    for (size_t j = 0; j < 6; ++j) CHECK(C[k][j].equals_exact(poly(pr, comm_golden[k][j])));
  }

  // defining identity: sum_k C[k][j] alpha^k = psi(h) alpha^j
  const ExtRingPtr& ring = data5().model().ring();
  const ExtElement th = ExtElement::theta(ring);
  for (int j = 0; j < 6; ++j) {
    ExtElement lhs = ExtElement::zero(ring);
    ExtElement thj = ExtElement::scalar(ring, Rat(1));
    for (int r = 0; r < j; ++r) thj = thj * th;
    for (int k = 0; k < 6; ++k) {
      ExtElement thk = ExtElement::scalar(ring, Rat(1));
      for (int r = 0; r < k; ++r) thk = thk * th;
      lhs = lhs + thk.scale(C[static_cast<size_t>(k)][static_cast<size_t>(j)]);
    }
    CHECK(lhs.equals_exact(data5().psi_h() * thj));
  }

  CHECK(commutation_matrix(data5())[0][5].equals_exact(cst(pr, 3120)));
}

TEST_CASE("adem rules match the published tables") {
  const HSeries::Params pr = P();
  for (int k = 1; k <= 5; ++k) {
    GammaElement want(pr);
    for (const AdemEntry& e : adem_golden.at(k)) want.add_term(W({e.i, e.j}), poly(pr, e.c));
    CHECK(pres5().adem(k).equals_exact(want));
    CHECK(pres5().adem(k).homogeneous(2));
    // no word on the right-hand side ends in Q_0
    for (const auto& [w, c] : pres5().adem(k).terms()) CHECK(w.gens[1] >= 1);
    // the rule is literally what rewriting Q_k Q_0 produces
    TokenWord tw{GammaToken::generator(k), GammaToken::generator(0)};
    CHECK(pres5().rewrite(tw).equals_exact(want));
  }
  CHECK(adem_relations(data5()).size() == 5);
}

TEST_CASE("cartan coefficients match the published table") {
  const HSeries::Params pr = P();
  const auto& R = pres5().cartan();
  REQUIRE(R.size() == 11);
  for (int s = 0; s <= 5; ++s)
    for (int k = 0; k < 6; ++k) {
      const HSeries& c = R[static_cast<size_t>(s)][static_cast<size_t>(k)];
      if (s == k)
        CHECK(c.equals_exact(cst(pr, 1)));
      else
        CHECK(c.is_zero());
    }
  for (int s = 6; s <= 10; ++s)
    for (int k = 0; k < 6; ++k)
      CHECK(R[static_cast<size_t>(s)][static_cast<size_t>(k)].equals_exact(
          poly(pr, cartan_golden[static_cast<size_t>(s - 6)][static_cast<size_t>(k)])));
  CHECK(cartan_tensor(data5())[10][5].equals_exact(poly(pr, {9450, 1})));
}

TEST_CASE("t elements match the published coefficients") {
  const HSeries::Params pr = P();
  const GammaElement t1g = pres5().t_gamma(1);
  CHECK(t1g.homogeneous(1));
  CHECK(t1g.terms().size() == 6);
  CHECK(t1g.coeff(W({0})).equals_exact(cst(pr, 6)));
  CHECK(t1g.coeff(W({1})).equals_exact(cst(pr, 10)));
  CHECK(t1g.coeff(W({2})).equals_exact(cst(pr, 30)));
  CHECK(t1g.coeff(W({3})).equals_exact(cst(pr, 130)));
  CHECK(t1g.coeff(W({4})).equals_exact(cst(pr, 630)));
  CHECK(t1g.coeff(W({5})).equals_exact(poly(pr, {3000, 5})));

  const GammaElement t2g = pres5().t_gamma(2);
  CHECK(t2g.homogeneous(2));
  CHECK(t2g.terms().size() == 21);
  CHECK(t2g.coeff(W({0, 0})).equals_exact(cst(pr, 1)));
  CHECK(t2g.coeff(W({0, 1})).equals_exact(poly(pr, {0, 1})));
  CHECK(t2g.coeff(W({0, 5})).equals_exact(poly(pr, {-818750, 218125, 4500, -1100, 0, 1})));
  CHECK(t2g.coeff(W({1, 1})).equals_exact(cst(pr, 5)));
  CHECK(t2g.coeff(W({2, 4})).equals_exact(poly(pr, {-6875, 0, 25})));
  CHECK(t2g.coeff(W({2, 5})).equals_exact(poly(pr, {37500, -13750, 0, 25})));
  CHECK(t2g.coeff(W({5, 5})).equals_exact(cst(pr, 3125)));

  CHECK(t_gamma(data5(), 1).equals_exact(t1g));
  try {
    pres5().t_gamma(3);
    FAIL("expected rejection of t index 3");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("rewriting fixes admissible words") {
  const HSeries::Params pr = P();
  TokenWord tw{GammaToken::generator(0), GammaToken::generator(2)};
  GammaElement nf = pres5().rewrite(tw);
  CHECK(nf.terms().size() == 1);
  CHECK(nf.coeff(W({0, 2})).equals_exact(cst(pr, 1)));

  TokenWord scaled{GammaToken::coefficient(cst(pr, 7)), GammaToken::generator(3)};
  GammaElement nf2 = pres5().rewrite(scaled);
  CHECK(nf2.coeff(W({3})).equals_exact(cst(pr, 7)));

  GammaElement nf3 = pres5().rewrite(TokenWord{GammaToken::coefficient(HSeries::h(pr))});
  CHECK(nf3.coeff(W({})).equals_exact(HSeries::h(pr)));

  try {
    pres5().rewrite(TokenWord{GammaToken::generator(6)});
    FAIL("expected range rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("rewriting agrees with operation semantics") {
  const HSeries::Params pr = P();
  // Degree bounds keep every intermediate below the working truncation, so
  // the composed applications stay exact. A shorter truncation is unsound:
  // discarded high powers of h feed back into low coefficients.
  const HSeries::Params work{Int(5), 112, 16};
  PsiApplier ap(data5(), work, work.M);
  std::mt19937 rng(424);

  std::vector<HSeries> inputs;
  std::vector<QTable> tables;
  for (int t = 0; t < 10; ++t) {
    inputs.push_back(random_series(rng, pr, 4));
    tables.push_back(build_qtable(ap, inputs.back(), 3));
  }

  std::uniform_int_distribution<int> len(1, 3), gen(0, 5), coin(0, 9), cdeg(0, 1);
  std::uniform_int_distribution<long> cc(-9, 9);
  for (int wi = 0; wi < 30; ++wi) {
    TokenWord word;
    int glen = len(rng);
    for (int t = 0; t < glen; ++t) {
      if (coin(rng) < 3) {
        std::vector<Rat> v(static_cast<size_t>(cdeg(rng)) + 1);
        for (Rat& c : v) c = cc(rng);
        word.push_back(GammaToken::coefficient(HSeries(pr, std::move(v))));
      }
      word.push_back(GammaToken::generator(gen(rng)));
    }
    GammaElement nf = pres5().rewrite(word);
    CHECK(nf.homogeneous(glen));
    for (int t = 0; t < 10; ++t) {
      HSeries raw = eval_word(ap, word, inputs[static_cast<size_t>(t)])
                        .with_truncation(pr.L)
                        .with_pprec(pr.M);
      HSeries nfval = eval_element(tables[static_cast<size_t>(t)], nf, pr);
      CHECK(raw.congruent(nfval));
    }
  }
}

TEST_CASE("moving a scalar then resolving adem matches composition") {
  const HSeries::Params pr = P();
  const HSeries::Params work{Int(5), 64, 16};
  PsiApplier ap(data5(), work, work.M);
  TokenWord word{GammaToken::generator(2), GammaToken::coefficient(HSeries::h(pr)),
                 GammaToken::generator(0)};
  GammaElement nf = pres5().rewrite(word);
  CHECK(nf.homogeneous(2));
  std::mt19937 rng(99);
  for (int t = 0; t < 20; ++t) {
    HSeries x = random_series(rng, pr, 8);
    QTable tab = build_qtable(ap, x, 2);
    HSeries raw = eval_word(ap, word, x).with_truncation(pr.L).with_pprec(pr.M);
    CHECK(raw.congruent(eval_element(tab, nf, pr)));
  }
}

TEST_CASE("rewrite order does not change normal forms") {
  // exhaustive words of length 3 over the generators and the scalar h,
  // contracted leftmost-first versus rightmost-first
  HSeries::Params pr = P(12, 8);
  PsiData data = derive_psi_h(model5(pr));
  GammaPresentation g(data);
  std::vector<GammaToken> alphabet;
  for (int i = 0; i <= 5; ++i) alphabet.push_back(GammaToken::generator(i));
  alphabet.push_back(GammaToken::coefficient(HSeries::h(pr)));
  for (size_t a = 0; a < alphabet.size(); ++a)
    for (size_t b = 0; b < alphabet.size(); ++b)
      for (size_t c = 0; c < alphabet.size(); ++c) {
        TokenWord word{alphabet[a], alphabet[b], alphabet[c]};
        GammaElement left = g.rewrite(word, RewriteOrder::leftmost);
        GammaElement right = g.rewrite(word, RewriteOrder::rightmost);
        CHECK(left.equals_exact(right));
      }
}

TEST_CASE("the degree-two element is central, the degree-one is not") {
  const HSeries::Params pr = P();
  const GammaElement t2g = pres5().t_gamma(2);
  for (int k = 0; k <= 5; ++k) {
    GammaElement qk(pr);
    qk.add_term(W({k}), cst(pr, 1));
    CHECK(pres5().commutator(t2g, qk).is_zero());
  }
  GammaElement hscalar(pr);
  hscalar.add_term(W({}), HSeries::h(pr));
  CHECK(pres5().commutator(t2g, hscalar).is_zero());

  const GammaElement t1g = pres5().t_gamma(1);
  GammaElement q1(pr);
  q1.add_term(W({1}), cst(pr, 1));
  GammaElement c = pres5().commutator(t1g, q1);
  CHECK_FALSE(c.is_zero());
  HSeries lead = c.coeff(W({0, 1}));
  CHECK(lead.reduced_mod_p_power(1).equals_exact(cst(pr, 1)));
  CHECK(commutator(data5(), t1g, q1).equals_exact(c));
}

TEST_CASE("presentation report lists all three sections") {
  std::string rep = pres5().report();
  CHECK(rep.find("commutation") != std::string::npos);
  CHECK(rep.find("adem") != std::string::npos);
  CHECK(rep.find("cartan") != std::string::npos);
  CHECK(rep.find("Q1 Q0 =") != std::string::npos);
}

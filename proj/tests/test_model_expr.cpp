#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "expr.hpp"
#include "model_io.hpp"

using namespace heckeops;

namespace {

HSeries::Params P(int L = 24, int M = 12) { return HSeries::Params{Int(5), L, M}; }

HSeries cst(const HSeries::Params& pr, long c) { return HSeries::constant(pr, Rat(c)); }

HSeries poly(const HSeries::Params& pr, std::vector<long> cs) {
  std::vector<Rat> v(cs.begin(), cs.end());
  return HSeries(pr, std::move(v));
}

const PsiData& data5() {
  static PsiData d = to_psi_data(builtin_model(), 24, 12);
  return d;
}

const GammaPresentation& pres5() {
  static GammaPresentation p(data5());
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("built-in model instantiates to the level-4 modulus") {
  const ModelFile mf = builtin_model();
  CHECK(mf.schema == 1);
  CHECK(mf.p == 5);
  CHECK(mf.level == 4);
  CHECK_FALSE(mf.psi_h.has_value());

  const HSeries::Params pr = P();
  WData wd = to_wdata(mf, pr.L, pr.M);
  CHECK(wd.rank() == 6);
  CHECK(wd.w()[0].equals_exact(cst(pr, 5)));
  CHECK(wd.w()[1].equals_exact(-HSeries::h(pr)));
  CHECK(wd.w()[2].equals_exact(cst(pr, 55)));
  CHECK(wd.w()[3].equals_exact(cst(pr, -60)));
  CHECK(wd.w()[4].equals_exact(cst(pr, 35)));
  CHECK(wd.w()[5].equals_exact(cst(pr, -10)));

  const PsiData& d = data5();
  CHECK(d.derived());
  CHECK(d.psi_h().coord(0).equals_exact(
      poly(pr, {-1462250, 168930, 12690, -1065, -10, 1})));
  CHECK(d.psi_h().coord(5).equals_exact(poly(pr, {-46680, -8440, 790, 10, -1})));
}

TEST_CASE("model text round trip preserves every field") {
  const ModelFile snap = from_psi_data(data5(), "round-trip check");
  REQUIRE(snap.psi_h.has_value());
  CHECK(snap.psi_h->size() == 6);

  const std::string text = model_to_text(snap);
  const ModelFile back = parse_model_text(text);
  CHECK(back.schema == 1);
  CHECK(back.p == snap.p);
  CHECK(back.level == snap.level);
  CHECK(back.residue_degree == snap.residue_degree);
  CHECK(back.w == snap.w);
  REQUIRE(back.psi_h.has_value());
  CHECK(*back.psi_h == *snap.psi_h);
  CHECK(back.provenance == "round-trip check");

  // Loading the explicit psi_h runs the double-application validation and
  // must land on the same operation data.
  const PsiData reloaded = to_psi_data(back, 24, 12);
  CHECK_FALSE(reloaded.derived());
  for (int k = 0; k < 6; ++k)
    CHECK(reloaded.psi_h().coord(k).equals_exact(data5().psi_h().coord(k)));
}

TEST_CASE("model files survive a disk round trip") {
  const std::string path = "/tmp/heckeops_model_io_test.json";
  const ModelFile snap = from_psi_data(data5(), "disk round-trip");
  write_model_file(snap, path);
  const ModelFile back = read_model_file(path);
  CHECK(back.w == snap.w);
  CHECK(*back.psi_h == *snap.psi_h);
  std::remove(path.c_str());

  CHECK(code_of([] { read_model_file("/tmp/definitely-missing-model.json"); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("model parsing rejects malformed input with the right codes") {
  CHECK(code_of([] { parse_model_text("not json at all"); }) == ErrorCode::parse);
  CHECK(code_of([] { parse_model_text("[1,2,3]"); }) == ErrorCode::parse);
  CHECK(code_of([] { parse_model_text("{\"schema\": 1}"); }) == ErrorCode::parse);

  const std::string base = model_to_text(builtin_model());

  std::string v2 = base;
  v2.replace(v2.find("\"schema\": 1"), 11, "\"schema\": 2");
  CHECK(code_of([&] { parse_model_text(v2); }) == ErrorCode::unsupported);

  std::string badc = base;
  badc.replace(badc.find("\"5\""), 3, "\"five\"");
  CHECK(code_of([&] { parse_model_text(badc); }) == ErrorCode::parse);

  // Mergeable duplicate terms are accepted and canonicalized.
  const ModelFile merged = parse_model_text(
      "{\"schema\":1,\"prime\":\"5\",\"level\":4,"
      "\"w\":[[[0,\"2\"],[0,\"3\"]],[[1,-1]],[[0,55]],[[0,-60]],[[0,35]],[[0,-10]]]}");
  CHECK(merged.w[0] == SparsePoly{{0, Int(5)}});
  CHECK(to_wdata(merged, 24, 12).w()[0].equals_exact(cst(P(), 5)));

  ModelFile bad_prime = builtin_model();
  bad_prime.p = 1;
  CHECK(code_of([&] { parse_model_text(model_to_text(bad_prime)); }) == ErrorCode::model);

  // Truncation too shallow for the stored polynomial degree.
  CHECK(code_of([] { to_wdata(builtin_model(), 1, 12); }) == ErrorCode::precision);

  ModelFile short_psi = from_psi_data(data5(), "");
  short_psi.psi_h->pop_back();
  CHECK(code_of([&] { to_psi_data(short_psi, 24, 12); }) == ErrorCode::model);
}

TEST_CASE("series expressions evaluate and respect precedence") {
  const HSeries::Params pr = P();
  CHECK(parse_series("h - 26", pr).equals_exact(poly(pr, {-26, 1})));
  CHECK(parse_series("delta", pr).equals_exact(poly(pr, {-26, 1})));

  const HSeries d = poly(pr, {-26, 1});
  CHECK(parse_series("(h-26)^2 * (h+1)", pr).equals_exact(d * d * poly(pr, {1, 1})));
  CHECK(parse_series("-10h^4 + h^5", pr)
            .equals_exact(HSeries::monomial(pr, 4, -10) + HSeries::monomial(pr, 5, 1)));
  CHECK(parse_series("2^3^2", pr).equals_exact(cst(pr, 64)));
  CHECK(parse_series("2*3^2", pr).equals_exact(cst(pr, 18)));
  CHECK(parse_series("2(h+1)", pr).equals_exact(poly(pr, {2, 2})));
  CHECK(parse_series("6/5", pr).equals_exact(HSeries::constant(pr, Rat(6, 5))));
  CHECK(parse_series("-h^2", pr).equals_exact(HSeries::monomial(pr, 2, -1)));
  CHECK(parse_series("--7", pr).equals_exact(cst(pr, 7)));
  CHECK(parse_series("(1/25)*h", pr).equals_exact(HSeries::monomial(pr, 1, Rat(1, 25))));
  CHECK(parse_series("h^0", pr).equals_exact(cst(pr, 1)));
}

TEST_CASE("printing then parsing is the identity on series") {
  const HSeries::Params pr = P();
  const HSeries samples[] = {
      poly(pr, {-1462250, 168930, 12690, -1065, -10, 1}),
      HSeries::zero(pr),
      cst(pr, -26),
      HSeries(pr, {Rat(1, 5), Rat(0), Rat(-3, 25), Rat(7)}),
      HSeries::h(pr),
  };
  for (const HSeries& s : samples) {
    CAPTURE(s.to_string());
    CHECK(parse_series(s.to_string(), pr).equals_exact(s));
  }
}

TEST_CASE("extension expressions cover the alpha basis") {
  const ExtRingPtr& ring = data5().model().ring();
  const HSeries::Params pr = P();

  const ExtElement alpha = ExtElement::theta(ring);
  CHECK(parse_ext("alpha", ring).equals_exact(alpha));
  CHECK(parse_ext("a", ring).equals_exact(alpha));
  CHECK(parse_ext("h*alpha^2 + 3", ring)
            .equals_exact(alpha.pow(2).scale(HSeries::h(pr)) +
                          ExtElement::scalar(ring, Rat(3))));

  // alpha^6 reduces through the modulus; compare against explicit reduction.
  CHECK(parse_ext("alpha^6", ring).equals_exact(alpha.pow(6)));

  const ExtElement psi = apply_psi(data5(), HSeries::h(pr));
  CAPTURE(psi.to_string());
  CHECK(parse_ext(psi.to_string(), ring).equals_exact(psi));

  const ExtElement mixed = apply_psi(data5(), poly(pr, {-26, 1})).inverse();
  CHECK(parse_ext(mixed.to_string(), ring).equals_exact(mixed));
}

TEST_CASE("operation-word expressions rewrite while parsing") {
  const GammaPresentation& pres = pres5();
  const HSeries::Params pr = P();

  const GammaElement q1q0 = parse_gamma("Q1*Q0", pres);
  CHECK(q1q0.equals_exact(pres.rewrite({GammaToken::generator(1), GammaToken::generator(0)})));
  CHECK(q1q0.equals_exact(pres.adem(1)));

  CHECK(parse_gamma("Q1 Q0", pres).equals_exact(q1q0));

  const GammaElement t1 = pres.t_gamma(1);
  CAPTURE(t1.to_string());
  CHECK(parse_gamma(t1.to_string(), pres).equals_exact(t1));

  const GammaElement t2 = pres.t_gamma(2);
  CHECK(parse_gamma(t2.to_string(), pres).equals_exact(t2));

  // Scalars commute into coefficients through the presentation tables.
  const GammaElement moved = parse_gamma("Q2 h", pres);
  GammaElement direct(pr);
  for (int j = 0; j < 6; ++j) {
    const HSeries& c = pres.commutation()[2][j];
    if (!c.is_zero()) direct.add_term(GammaWord{{j}}, c);
  }
  CHECK(moved.equals_exact(direct));

  CHECK(parse_gamma("Q1^2", pres).equals_exact(
      pres.rewrite({GammaToken::generator(1), GammaToken::generator(1)})));
  CHECK(parse_gamma("7", pres).coeff(GammaWord{}).equals_exact(cst(pr, 7)));
  CHECK(parse_gamma("Q1 - Q1", pres).is_zero());
}

TEST_CASE("token words flatten products without rewriting") {
  const PsiData& d = data5();
  const TokenWord w = parse_token_word("Q1 Q0", d);
  REQUIRE(w.size() == 2);
  CHECK(w[0].is_gen);
  CHECK(w[0].gen == 1);
  CHECK(w[1].gen == 0);

  const TokenWord scaled = parse_token_word("(h-26) Q1^2", d);
  REQUIRE(scaled.size() == 3);
  CHECK_FALSE(scaled[0].is_gen);
  CHECK(scaled[0].scalar.equals_exact(poly(P(), {-26, 1})));
  CHECK(scaled[1].gen == 1);
  CHECK(scaled[2].gen == 1);

  const TokenWord divided = parse_token_word("Q3/5", d);
  REQUIRE(divided.size() == 2);
  CHECK(divided[1].scalar.equals_exact(HSeries::constant(P(), Rat(1, 5))));

  CHECK(code_of([&] { parse_token_word("Q1 + Q0", d); }) == ErrorCode::parse);
  CHECK(code_of([&] { parse_token_word("h/Q1", d); }) == ErrorCode::parse);
}

TEST_CASE("expression errors carry positions and the right codes") {
  const HSeries::Params pr = P();
  const auto expect_parse = [&](const std::string& text) {
    try {
      parse_series(text, pr);
      FAIL("expected a parse error for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  };
  expect_parse("h +");
  expect_parse("(h");
  expect_parse("h^x");
  expect_parse("h @ 2");
  expect_parse("foo + 1");
  expect_parse("alpha");
  expect_parse("Q1");

  CHECK(code_of([&] { parse_series("1/0", pr); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { parse_series("h/(h+1)", pr); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { parse_ext("Q2", data5().model().ring()); }) == ErrorCode::parse);
  CHECK(code_of([&] { parse_gamma("Q6", pres5()); }) == ErrorCode::parse);
  CHECK(code_of([&] { parse_gamma("alpha", pres5()); }) == ErrorCode::parse);

  // Division works on words and extension elements when the divisor is a
  // plain rational.
  CHECK(parse_gamma("Q1/5", pres5())
            .coeff(GammaWord{{1}})
            .equals_exact(HSeries::constant(pr, Rat(1, 5))));
  CHECK(parse_ext("alpha/2", data5().model().ring())
            .equals_exact(ExtElement::theta(data5().model().ring()).scale(Rat(1, 2))));
}

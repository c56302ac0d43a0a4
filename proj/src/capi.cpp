#include "heckeops.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "curve_lab.hpp"
#include "expr.hpp"
#include "model_io.hpp"
#include "modular_forms.hpp"
#include "verify.hpp"

using namespace heckeops;

// Loaded model plus lazily built operator caches. Not synchronized; the
// header pins one context per thread.
struct ho_ctx {
  PsiData data;
  std::string source;

  ho_ctx(PsiData d, std::string s) : data(std::move(d)), source(std::move(s)) {}

  HeckeOps& ops() {
    if (!ops_) ops_.emplace(data);
    return *ops_;
  }
  GammaPresentation& pres() {
    if (!pres_) pres_.emplace(data);
    return *pres_;
  }

 private:
  std::optional<HeckeOps> ops_;
  std::optional<GammaPresentation> pres_;
};

namespace {

using Json = nlohmann::ordered_json;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return HO_ERR_INVALID;
    case ErrorCode::parse: return HO_ERR_PARSE;
    case ErrorCode::model: return HO_ERR_MODEL;
    case ErrorCode::precision: return HO_ERR_PRECISION;
    case ErrorCode::unsupported: return HO_ERR_UNSUPPORTED;
    case ErrorCode::verify: return HO_ERR_VERIFY;
    case ErrorCode::internal: return HO_ERR_INTERNAL;
  }
  return HO_ERR_INTERNAL;
}

int wrap(char** out, const std::function<std::string()>& fn) {
  try {
    const std::string text = fn();
    if (out) *out = dup_string(text);
    return HO_OK;
  } catch (const Error& e) {
    if (out) *out = dup_string(e.what());
    return status_of(e.code());
  } catch (const std::exception& e) {
    if (out) *out = dup_string(std::string("unexpected error: ") + e.what());
    return HO_ERR_INTERNAL;
  }
}

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string rat_plain(const Rat& c) {
  if (den(c) == 1) return num(c).str();
  return num(c).str() + "/" + den(c).str();
}

// c printed as a leading factor: integers bare, fractions parenthesized.
std::string rat_factor(const Rat& c) {
  if (den(c) == 1) return num(c).str();
  return "(" + rat_plain(c) + ")";
}

// When the result is a scalar multiple of the input, report it factored
// against the user's own expression text.
std::optional<std::string> factored_form(const HSeries& value, const HSeries& input,
                                         const std::string& expr_text) {
  if (input.is_zero()) return std::nullopt;
  int e = 0;
  while (input.coeff(e) == 0) ++e;
  const Rat c = value.coeff(e) / input.coeff(e);
  if (c == 1) return std::nullopt;
  if (!value.equals_exact(input * c)) return std::nullopt;
  return rat_factor(c) + "*(" + trimmed(expr_text) + ")";
}

Int parse_prime(const char* prime, const char* what) {
  require(prime != nullptr && *prime != '\0', ErrorCode::invalid_argument,
          std::string(what) + ": missing prime");
  Int p;
  try {
    p = Int(std::string(prime));
  } catch (const std::exception&) {
    fail(ErrorCode::invalid_argument, std::string(what) + ": prime is not a decimal integer");
  }
  require(p >= 2, ErrorCode::invalid_argument, std::string(what) + ": prime must be at least 2");
  require(p < 1000000, ErrorCode::unsupported,
          std::string(what) + ": primes above 10^6 are not supported");
  for (Int d = 2; d * d <= p; ++d)
    require(p % d != 0, ErrorCode::invalid_argument,
            std::string(what) + ": " + p.str() + " is not prime");
  return p;
}

// ---- q-series formatting -------------------------------------------------

Json qseries_terms(const QSeries& s) {
  Json terms = Json::array();
  if (s.is_zero()) return terms;
  for (int m = s.lowest(); m <= s.truncation(); ++m) {
    const Rat c = s.coeff(m);
    if (c != 0) terms.push_back(Json::array({m, rat_plain(c)}));
  }
  return terms;
}

void append_qseries_text(std::ostringstream& out, const QSeries& s, const std::string& indent) {
  bool any = false;
  if (!s.is_zero())
    for (int m = s.lowest(); m <= s.truncation(); ++m) {
      const Rat c = s.coeff(m);
      if (c == 0) continue;
      out << indent << "q^" << m << ": " << rat_plain(c) << "\n";
      any = true;
    }
  if (!any) out << indent << "0\n";
}

void append_logqseries_text(std::ostringstream& out, const LogQSeries& f) {
  for (int j = f.order(); j >= 0; --j) {
    if (f.order() > 0) out << "(log q)^" << j << ":\n";
    append_qseries_text(out, f.comp(j), f.order() > 0 ? "  " : "");
  }
}

Json logqseries_json(const LogQSeries& f) {
  Json comps = Json::array();
  for (int j = f.order(); j >= 0; --j)
    comps.push_back(Json{{"log_power", j}, {"terms", qseries_terms(f.comp(j))}});
  return comps;
}

}  // namespace

extern "C" {

void ho_string_free(char* s) { std::free(s); }

int ho_ctx_open(const char* path, int h_prec, int p_prec, ho_ctx** out_ctx, char** out_err) {
  if (out_ctx == nullptr) {
    if (out_err) *out_err = dup_string("out_ctx must not be NULL");
    return HO_ERR_INVALID;
  }
  *out_ctx = nullptr;
  try {
    require(h_prec >= 2 && h_prec <= 4096, ErrorCode::invalid_argument,
            "h-truncation must be between 2 and 4096");
    require(p_prec >= 1 && p_prec <= 4096, ErrorCode::invalid_argument,
            "p-adic precision must be between 1 and 4096");
    const ModelFile mf = (path == nullptr) ? builtin_model() : read_model_file(path);
    auto* ctx = new ho_ctx{to_psi_data(mf, h_prec, p_prec),
                           path == nullptr ? std::string("builtin") : std::string(path)};
    *out_ctx = ctx;
    return HO_OK;
  } catch (const Error& e) {
    if (out_err) *out_err = dup_string(e.what());
    return status_of(e.code());
  } catch (const std::exception& e) {
    if (out_err) *out_err = dup_string(std::string("unexpected error: ") + e.what());
    return HO_ERR_INTERNAL;
  }
}

void ho_ctx_close(ho_ctx* ctx) { delete ctx; }

int ho_model_info(ho_ctx* ctx, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    const WData& m = ctx->data.model();
    const HSeries::Params pr = m.params();
    if (as_json) {
      Json j;
      j["source"] = ctx->source;
      j["prime"] = m.p().str();
      j["level"] = m.level();
      j["residue_degree"] = m.residue_degree();
      j["h_truncation"] = pr.L;
      j["p_precision"] = pr.M;
      Json w = Json::array();
      for (const HSeries& wi : m.w()) w.push_back(wi.to_string());
      j["w"] = std::move(w);
      j["psi_h_derived"] = ctx->data.derived();
      return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "source: " << ctx->source << "\n";
    os << "prime: " << m.p().str() << "\n";
    os << "level: " << m.level() << "\n";
    os << "residue degree: " << m.residue_degree() << "\n";
    os << "h-truncation: " << pr.L << "\n";
    os << "p-precision: " << pr.M << "\n";
    for (int i = 0; i < m.rank(); ++i)
      os << "w_" << i << " = " << m.w()[static_cast<size_t>(i)].to_string() << "\n";
    os << "psi(h): " << (ctx->data.derived() ? "derived from the modulus" : "loaded from the file")
       << "\n";
    return os.str();
  });
}

int ho_derive_model(const char* curve, const char* prime, const char* out_path, char** out) {
  return wrap(out, [&]() -> std::string {
    require(curve != nullptr && std::string(curve) == "c4", ErrorCode::unsupported,
            "unknown curve family; available: c4");
    require(out_path != nullptr && *out_path != '\0', ErrorCode::invalid_argument,
            "missing output path for the model file");
    const Int p = parse_prime(prime, "derive");

    const KappaPolynomial K = reconstruct_kappa_polynomial(weierstrass_c4(), p);
    const HSeries::Params pr{p, 24, 12};
    const WData wd = specialize_to_E0(K, pr);
    const PsiData derived = derive_psi_h(wd);
    const ModelFile mf = from_psi_data(
        derived,
        "derived from the degree-" + std::to_string(wd.rank()) +
            " subgroup polynomial of the level-4 curve at p = " + p.str() +
            " by sampling torsion points and reconstructing exact coefficients");
    write_model_file(mf, out_path);

    std::ostringstream os;
    os << "model written to " << out_path << "\n";
    os << "prime: " << p.str() << "\n";
    os << "level: " << wd.level() << "\n";
    os << "subgroup polynomial: " << K.to_string() << "\n";
    for (int i = 0; i < wd.rank(); ++i)
      os << "w_" << i << " = " << wd.w()[static_cast<size_t>(i)].to_string() << "\n";
    os << "psi(h) stored with " << wd.rank() << " coordinates\n";
    return os.str();
  });
}

int ho_psi(ho_ctx* ctx, const char* expr, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    require(expr != nullptr, ErrorCode::invalid_argument, "missing expression");
    const HSeries x = parse_series(expr, ctx->data.model().params());
    const ExtElement img = apply_psi(ctx->data, x);
    const int rank = ctx->data.model().rank();
    if (as_json) {
      Json j;
      j["expr"] = trimmed(expr);
      Json coords = Json::array();
      for (int k = 0; k < rank; ++k) coords.push_back(img.coord(k).to_string());
      j["coords"] = std::move(coords);
      return j.dump(2) + "\n";
    }
    std::ostringstream os;
    for (int k = 0; k < rank; ++k)
      os << "alpha^" << k << ": " << img.coord(k).to_string() << "\n";
    return os.str();
  });
}

int ho_hecke(ho_ctx* ctx, const char* op, int weight, const char* expr, int as_json,
             char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    require(op != nullptr, ErrorCode::invalid_argument, "missing operator name");
    require(expr != nullptr, ErrorCode::invalid_argument, "missing expression");
    const std::string name(op);
    const HSeries x = parse_series(expr, ctx->data.model().params());
    HSeries value;
    if (name == "t1")
      value = ctx->ops().t1(x);
    else if (name == "t2")
      value = ctx->ops().t2(x);
    else if (name == "weighted")
      value = ctx->ops().weighted_t1(x, weight);
    else
      fail(ErrorCode::invalid_argument, "unknown operator '" + name +
                                            "'; expected t1, t2 or weighted");
    const std::optional<std::string> factored = factored_form(value, x, expr);
    if (as_json) {
      Json j;
      j["op"] = name;
      if (name == "weighted") j["weight"] = weight;
      j["expr"] = trimmed(expr);
      j["value"] = value.to_string();
      if (factored) j["factored"] = *factored;
      return j.dump(2) + "\n";
    }
    return (factored ? *factored : value.to_string()) + "\n";
  });
}

int ho_log_op(ho_ctx* ctx, const char* expr, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    require(expr != nullptr, ErrorCode::invalid_argument, "missing expression");
    const HSeries x = parse_series(expr, ctx->data.model().params());
    const HSeries value = ctx->ops().ell(x).reduced_mod_pM();
    if (as_json) {
      Json j;
      j["expr"] = trimmed(expr);
      j["value"] = value.to_string();
      return j.dump(2) + "\n";
    }
    return value.to_string() + "\n";
  });
}

int ho_gamma_presentation(ho_ctx* ctx, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    const GammaPresentation& pres = ctx->pres();
    if (!as_json) return pres.report();
    const int rank = ctx->data.model().rank();
    Json j;
    Json comm = Json::array();
    for (int k = 0; k < rank; ++k) {
      Json row = Json::array();
      for (int jj = 0; jj < rank; ++jj)
        row.push_back(pres.commutation()[static_cast<size_t>(k)][static_cast<size_t>(jj)]
                          .to_string());
      comm.push_back(std::move(row));
    }
    j["commutation"] = std::move(comm);
    Json adem = Json::object();
    for (int k = 1; k < rank; ++k)
      adem["Q" + std::to_string(k) + " Q0"] = pres.adem(k).to_string();
    j["adem"] = std::move(adem);
    Json cart = Json::array();
    for (size_t s = 0; s < pres.cartan().size(); ++s) {
      Json row = Json::array();
      for (const HSeries& c : pres.cartan()[s]) row.push_back(c.to_string());
      cart.push_back(std::move(row));
    }
    j["cartan"] = std::move(cart);
    return j.dump(2) + "\n";
  });
}

int ho_gamma_rewrite(ho_ctx* ctx, const char* word, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    require(word != nullptr, ErrorCode::invalid_argument, "missing word expression");
    const GammaElement nf = parse_gamma(word, ctx->pres());
    if (as_json) {
      Json j;
      j["expr"] = trimmed(word);
      j["normal_form"] = nf.to_string();
      return j.dump(2) + "\n";
    }
    return nf.to_string() + "\n";
  });
}

int ho_gamma_center(ho_ctx* ctx, const char* which, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(ctx != nullptr, ErrorCode::invalid_argument, "context must not be NULL");
    require(which != nullptr, ErrorCode::invalid_argument, "missing element name");
    const std::string name(which);
    require(name == "t1" || name == "t2", ErrorCode::invalid_argument,
            "unknown element '" + name + "'; expected t1 or t2");
    const GammaPresentation& pres = ctx->pres();
    const HSeries::Params pr = ctx->data.model().params();
    const GammaElement t = pres.t_gamma(name == "t1" ? 1 : 2);
    const int rank = ctx->data.model().rank();

    std::vector<std::pair<std::string, bool>> rows;
    for (int k = 0; k < rank; ++k) {
      GammaElement qk(pr);
      qk.add_term(GammaWord{{k}}, HSeries::constant(pr, 1));
      rows.emplace_back("Q" + std::to_string(k), pres.commutator(t, qk).is_zero());
    }
    GammaElement hs(pr);
    hs.add_term(GammaWord{}, HSeries::h(pr));
    rows.emplace_back("h", pres.commutator(t, hs).is_zero());

    bool central = true;
    for (const auto& [with, zero] : rows) central = central && zero;

    std::string obstruction;
    if (!central && name == "t1") {
      GammaElement q1(pr);
      q1.add_term(GammaWord{{1}}, HSeries::constant(pr, 1));
      const HSeries c =
          pres.commutator(t, q1).coeff(GammaWord{{0, 1}}).reduced_mod_p_power(1);
      obstruction = c.to_string();
    }

    if (as_json) {
      Json j;
      j["element"] = name;
      Json cs = Json::array();
      for (const auto& [with, zero] : rows) cs.push_back(Json{{"with", with}, {"zero", zero}});
      j["commutators"] = std::move(cs);
      j["central"] = central;
      if (!obstruction.empty()) j["q0q1_coefficient_mod_p"] = obstruction;
      return j.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto& [with, zero] : rows)
      os << "[" << name << ", " << with << "] " << (zero ? "= 0" : "!= 0") << "\n";
    os << "central: " << (central ? "yes" : "no") << "\n";
    if (!obstruction.empty())
      os << "Q0 Q1 coefficient of [" << name << ", Q1] mod " << ctx->data.model().p().str()
         << ": " << obstruction << "\n";
    return os.str();
  });
}

int ho_qseries(const char* op, const char* prime, int trunc, int as_json, char** out) {
  return wrap(out, [&]() -> std::string {
    require(op != nullptr, ErrorCode::invalid_argument, "missing q-series operation");
    require(trunc >= 1 && trunc <= 100000, ErrorCode::invalid_argument,
            "q-truncation must be between 1 and 100000");
    const std::string name(op);

    Json j;
    j["op"] = name;
    std::ostringstream os;
    LogQSeries result = LogQSeries::from_qseries(0, QSeries::zero(trunc));
    std::optional<Rat> eigenvalue;
    std::optional<bool> matches;

    if (name == "delta") {
      result = LogQSeries::from_qseries(12, delta_qexp(trunc));
    } else if (name == "e2") {
      result = LogQSeries::from_qseries(2, e2_qexp(trunc));
    } else if (name == "log-delta") {
      result = log_qexp(delta_qexp(trunc));
    } else if (name == "serre") {
      result = LogQSeries::from_qseries(14, serre_derivative(delta_qexp(trunc), 12));
      matches = result.is_zero();
    } else if (name == "hecke") {
      const Int p = parse_prime(prime, "qseries");
      const long pl = p.convert_to<long>();
      const LogQSeries logd = log_qexp(delta_qexp(trunc));
      result = hecke_Tp(logd, pl);
      eigenvalue = sigma(-1, pl);
      matches = (result == logd.scale(*eigenvalue));
    } else if (name == "f1") {
      const Int p = parse_prime(prime, "qseries");
      result = f_operator(log_qexp(delta_qexp(trunc)), p.convert_to<long>());
      matches = result.is_zero();
    } else {
      fail(ErrorCode::invalid_argument,
           "unknown q-series operation '" + name +
               "'; expected delta, e2, log-delta, hecke, serre or f1");
    }

    if (as_json) {
      if (prime != nullptr && (name == "hecke" || name == "f1")) j["prime"] = std::string(prime);
      j["truncation"] = result.truncation();
      j["weight"] = result.weight();
      j["components"] = logqseries_json(result);
      if (eigenvalue) j["eigenvalue"] = rat_plain(*eigenvalue);
      if (matches) j["matches_expected"] = *matches;
      return j.dump(2) + "\n";
    }
    append_logqseries_text(os, result);
    os << "truncation: q^" << result.truncation() << "\n";
    if (eigenvalue)
      os << "eigenvalue: " << rat_plain(*eigenvalue) << "\n"
         << "matches eigenvalue * log-delta: " << (*matches ? "yes" : "no") << "\n";
    else if (matches)
      os << "annihilated: " << (*matches ? "yes" : "no") << "\n";
    return os.str();
  });
}

int ho_verify(int h_prec, int p_prec, int q_prec, int concurrent, int as_json, char** out,
              int* failures) {
  return wrap(out, [&]() -> std::string {
    VerifyOptions opt;
    if (h_prec > 0) opt.h_prec = h_prec;
    if (p_prec > 0) opt.p_prec = p_prec;
    if (q_prec > 0) opt.q_prec = q_prec;
    opt.concurrent = concurrent != 0;
    const std::vector<VerifyResult> results = run_verification(opt);
    if (failures) {
      int n = 0;
      for (const VerifyResult& r : results)
        if (!r.pass) ++n;
      *failures = n;
    }
    return format_report(results, as_json != 0);
  });
}

}  // extern "C"

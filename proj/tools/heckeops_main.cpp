// Command-line front end. Talks to the library through the C interface
// only, so it exercises the same surface other language bindings would.
#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "heckeops.h"

namespace {

// 0 success, 1 verification failure, 2 usage or parse error, 3 model,
// precision or internal error.
int exit_of(int status, int verify_failures = 0) {
  switch (status) {
    case HO_OK:
      return verify_failures > 0 ? 1 : 0;
    case HO_ERR_VERIFY:
      return 1;
    case HO_ERR_PARSE:
    case HO_ERR_INVALID:
      return 2;
    default:
      return 3;
  }
}

int emit(int status, char* out, int verify_failures = 0) {
  if (out != nullptr) {
    if (status == HO_OK)
      std::fputs(out, stdout);
    else
      std::fprintf(stderr, "error: %s\n", out);
    ho_string_free(out);
  }
  return exit_of(status, verify_failures);
}

struct Ctx {
  ho_ctx* c = nullptr;
  ~Ctx() { ho_ctx_close(c); }
};

// Opens the model context, printing the failure to stderr on error.
int open_ctx(const std::string& model, int h_prec, int p_prec, Ctx& ctx) {
  char* err = nullptr;
  const int rc = ho_ctx_open(model.empty() ? nullptr : model.c_str(), h_prec, p_prec, &ctx.c,
                             &err);
  if (rc != HO_OK && err != nullptr) {
    std::fprintf(stderr, "error: %s\n", err);
    ho_string_free(err);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact power-operation and Hecke-operator calculator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string model;       // empty = built-in prime-5 level-4 model
  std::string format = "plain";
  int h_prec = 24;
  int p_prec = 12;
  app.add_option("--model", model, "model file (defaults to the built-in prime-5 model)");
  app.add_option("--h-prec", h_prec, "series truncation order")->capture_default_str();
  app.add_option("--p-prec", p_prec, "p-adic precision exponent")->capture_default_str();
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"plain", "json"}))
      ->capture_default_str();

  auto* derive = app.add_subcommand("derive-model",
                                    "derive a model file from a curve family");
  std::string curve = "c4";
  std::string dprime = "5";
  std::string out_path = "c4_p5.json";
  derive->add_option("--curve", curve, "curve family")->capture_default_str();
  derive->add_option("--prime", dprime, "prime")->capture_default_str();
  derive->add_option("--out", out_path, "output model path")->capture_default_str();

  auto* info = app.add_subcommand("model-info", "show the loaded model");

  auto* psi = app.add_subcommand("psi", "total power operation of a series expression");
  std::string psi_expr;
  psi->add_option("--expr", psi_expr, "series expression")->required();

  auto* hecke = app.add_subcommand("hecke", "averaged operators t1, t2 and weighted t1");
  std::string hecke_op;
  std::string hecke_expr;
  int weight = 0;
  hecke->add_option("--op", hecke_op, "operator")
      ->check(CLI::IsMember({"t1", "t2", "weighted"}))
      ->required();
  hecke->add_option("--weight", weight, "twist weight for the weighted operator")
      ->capture_default_str();
  hecke->add_option("--expr", hecke_expr, "series expression")->required();

  auto* logop = app.add_subcommand("log-op", "p-adic logarithm operation on a unit");
  std::string log_expr;
  logop->add_option("--expr", log_expr, "series expression")->required();

  auto* gamma = app.add_subcommand("gamma", "operation-algebra presentation and rewriting");
  std::string emit_what = "presentation";
  std::string word;
  std::string center;
  gamma->add_option("--emit", emit_what, "presentation or rewrite")
      ->check(CLI::IsMember({"presentation", "rewrite"}))
      ->capture_default_str();
  gamma->add_option("--expr", word, "word expression for --emit rewrite");
  gamma->add_option("--check-center", center, "report whether t1 or t2 is central")
      ->check(CLI::IsMember({"t1", "t2"}));

  auto* qseries = app.add_subcommand("qseries", "classical and logarithmic q-expansions");
  std::string q_op;
  std::string q_prime = "5";
  int trunc = 60;
  qseries->add_option("--op", q_op, "operation")
      ->check(CLI::IsMember({"delta", "e2", "log-delta", "hecke", "serre", "f1"}))
      ->required();
  qseries->add_option("--prime", q_prime, "prime for hecke and f1")->capture_default_str();
  qseries->add_option("--trunc", trunc, "q-expansion truncation")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the golden verification suite");
  bool all = false;
  bool sequential = false;
  int q_prec = 60;
  verify->add_flag("--all", all, "run every check (the default and only mode)");
  verify->add_flag("--sequential", sequential, "run checks one at a time");
  verify->add_option("--q-prec", q_prec, "q-expansion truncation for q-series checks")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const int as_json = format == "json" ? 1 : 0;
  char* out = nullptr;

  if (derive->parsed()) {
    const int rc = ho_derive_model(curve.c_str(), dprime.c_str(), out_path.c_str(), &out);
    return emit(rc, out);
  }

  if (verify->parsed()) {
    const auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    const int rc = ho_verify(h_prec, p_prec, q_prec, sequential ? 0 : 1, as_json, &out,
                             &failures);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::fprintf(stderr, "verify wall time: %.1fs\n", dt.count());
    return emit(rc, out, failures);
  }

  if (qseries->parsed()) {
    const int rc = ho_qseries(q_op.c_str(), q_prime.c_str(), trunc, as_json, &out);
    return emit(rc, out);
  }

  Ctx ctx;
  const int open_rc = open_ctx(model, h_prec, p_prec, ctx);
  if (open_rc != HO_OK) return exit_of(open_rc);

  if (info->parsed()) {
    const int rc = ho_model_info(ctx.c, as_json, &out);
    return emit(rc, out);
  }
  if (psi->parsed()) {
    const int rc = ho_psi(ctx.c, psi_expr.c_str(), as_json, &out);
    return emit(rc, out);
  }
  if (hecke->parsed()) {
    const int rc = ho_hecke(ctx.c, hecke_op.c_str(), weight, hecke_expr.c_str(), as_json, &out);
    return emit(rc, out);
  }
  if (logop->parsed()) {
    const int rc = ho_log_op(ctx.c, log_expr.c_str(), as_json, &out);
    return emit(rc, out);
  }
  if (gamma->parsed()) {
    if (!center.empty()) {
      const int rc = ho_gamma_center(ctx.c, center.c_str(), as_json, &out);
      return emit(rc, out);
    }
    if (emit_what == "rewrite") {
      if (word.empty()) {
        std::fprintf(stderr, "error: --emit rewrite needs --expr WORD\n");
        return 2;
      }
      const int rc = ho_gamma_rewrite(ctx.c, word.c_str(), as_json, &out);
      return emit(rc, out);
    }
    const int rc = ho_gamma_presentation(ctx.c, as_json, &out);
    return emit(rc, out);
  }

  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}

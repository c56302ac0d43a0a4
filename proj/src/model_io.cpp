#include "model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace heckeops {

namespace {

using Json = nlohmann::ordered_json;

SparsePoly poly_from_json(const Json& j, const std::string& where) {
  if (!j.is_array())
    fail(ErrorCode::parse,
         "model file: " + where + " must be an array of [exponent, coefficient] pairs");
  SparsePoly out;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer())
      fail(ErrorCode::parse, "model file: malformed term in " + where +
                                 "; expected [nonnegative integer, decimal string]");
    const long long e = pair[0].get<long long>();
    if (e < 0) fail(ErrorCode::parse, "model file: negative exponent in " + where);
    Int c;
    if (pair[1].is_string()) {
      try {
        c = Int(pair[1].get<std::string>());
      } catch (const std::exception&) {
        fail(ErrorCode::parse, "model file: coefficient in " + where +
                                   " is not a decimal integer: \"" +
                                   pair[1].get<std::string>() + "\"");
      }
    } else if (pair[1].is_number_integer()) {
      c = Int(pair[1].get<long long>());
    } else {
      fail(ErrorCode::parse,
           "model file: coefficient in " + where + " must be a string or integer");
    }
    out.emplace_back(static_cast<int>(e), std::move(c));
  }
  return out;
}

Json poly_to_json(const SparsePoly& sp) {
  Json out = Json::array();
  for (const auto& [e, c] : sp) out.push_back(Json::array({e, c.str()}));
  return out;
}

// Canonical form: exponents ascending, duplicates merged, zeros dropped.
SparsePoly canonical(const SparsePoly& sp) {
  int top = -1;
  for (const auto& [e, c] : sp) top = std::max(top, e);
  std::vector<Int> dense(static_cast<size_t>(top + 1), Int(0));
  for (const auto& [e, c] : sp) dense[static_cast<size_t>(e)] += c;
  SparsePoly out;
  for (int e = 0; e <= top; ++e)
    if (dense[static_cast<size_t>(e)] != 0) out.emplace_back(e, dense[static_cast<size_t>(e)]);
  return out;
}

HSeries to_hseries(const SparsePoly& sp, const HSeries::Params& pr, const std::string& where) {
  std::vector<Rat> c;
  for (const auto& [e, v] : sp) {
    if (e >= pr.L)
      fail(ErrorCode::precision, "model file: " + where + " has an h^" + std::to_string(e) +
                                     " term; raise the h-truncation above " +
                                     std::to_string(pr.L));
    if (static_cast<int>(c.size()) <= e) c.resize(static_cast<size_t>(e) + 1);
    c[static_cast<size_t>(e)] += Rat(v);
  }
  return HSeries(pr, std::move(c));
}

SparsePoly to_sparse(const HSeries& s, const std::string& where) {
  SparsePoly out;
  for (int e = 0; e <= s.degree(); ++e) {
    const Rat c = s.coeff(e);
    if (c == 0) continue;
    if (den(c) != 1)
      fail(ErrorCode::invalid_argument,
           "model serialization: " + where + " has a non-integer coefficient " +
               num(c).str() + "/" + den(c).str());
    out.emplace_back(e, num(c));
  }
  return out;
}

int require_int(const Json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer())
    fail(ErrorCode::parse,
         std::string("model file: missing or non-integer field \"") + field + "\"");
  return j[field].get<int>();
}

}  // namespace

ModelFile parse_model_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& ex) {
    fail(ErrorCode::parse, std::string("model file: ") + ex.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse, "model file: top level must be a JSON object");

  ModelFile mf;
  mf.schema = require_int(j, "schema");
  if (mf.schema != 1)
    fail(ErrorCode::unsupported,
         "model file: schema version " + std::to_string(mf.schema) + " is not supported");

  if (!j.contains("prime"))
    fail(ErrorCode::parse, "model file: missing field \"prime\"");
  if (j["prime"].is_string()) {
    try {
      mf.p = Int(j["prime"].get<std::string>());
    } catch (const std::exception&) {
      fail(ErrorCode::parse, "model file: \"prime\" is not a decimal integer");
    }
  } else if (j["prime"].is_number_integer()) {
    mf.p = Int(j["prime"].get<long long>());
  } else {
    fail(ErrorCode::parse, "model file: \"prime\" must be a string or integer");
  }
  if (mf.p < 2) fail(ErrorCode::model, "model file: prime must be at least 2");

  mf.level = require_int(j, "level");
  if (mf.level < 1) fail(ErrorCode::model, "model file: level must be positive");
  mf.residue_degree = j.contains("residue_degree") ? require_int(j, "residue_degree") : 1;

  if (!j.contains("w") || !j["w"].is_array() || j["w"].empty())
    fail(ErrorCode::parse, "model file: missing modulus coefficient array \"w\"");
  int idx = 0;
  for (const Json& pj : j["w"])
    mf.w.push_back(canonical(poly_from_json(pj, "w[" + std::to_string(idx++) + "]")));

  if (j.contains("psi_h") && !j["psi_h"].is_null()) {
    if (!j["psi_h"].is_array())
      fail(ErrorCode::parse, "model file: \"psi_h\" must be an array of polynomials");
    std::vector<SparsePoly> coords;
    idx = 0;
    for (const Json& pj : j["psi_h"])
      coords.push_back(canonical(poly_from_json(pj, "psi_h[" + std::to_string(idx++) + "]")));
    mf.psi_h = std::move(coords);
  }

  if (j.contains("provenance")) {
    if (!j["provenance"].is_string())
      fail(ErrorCode::parse, "model file: \"provenance\" must be a string");
    mf.provenance = j["provenance"].get<std::string>();
  }
  return mf;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::invalid_argument, "cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

std::string model_to_text(const ModelFile& mf) {
  Json j = Json::object();
  j["schema"] = mf.schema;
  j["prime"] = mf.p.str();
  j["level"] = mf.level;
  j["residue_degree"] = mf.residue_degree;
  Json w = Json::array();
  for (const SparsePoly& sp : mf.w) w.push_back(poly_to_json(canonical(sp)));
  j["w"] = std::move(w);
  if (mf.psi_h) {
    Json ph = Json::array();
    for (const SparsePoly& sp : *mf.psi_h) ph.push_back(poly_to_json(canonical(sp)));
    j["psi_h"] = std::move(ph);
  }
  j["provenance"] = mf.provenance;
  return j.dump(2) + "\n";
}

void write_model_file(const ModelFile& mf, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::invalid_argument, "cannot write model file: " + path);
  out << model_to_text(mf);
  if (!out) fail(ErrorCode::internal, "short write on model file: " + path);
}

WData to_wdata(const ModelFile& mf, int h_prec, int p_prec) {
  if (h_prec < 1 || p_prec < 1)
    fail(ErrorCode::invalid_argument, "working precisions must be positive");
  const HSeries::Params pr{mf.p, h_prec, p_prec};
  std::vector<HSeries> w;
  for (size_t i = 0; i < mf.w.size(); ++i)
    w.push_back(to_hseries(mf.w[i], pr, "w[" + std::to_string(i) + "]"));
  return WData(mf.p, mf.level, std::move(w), mf.residue_degree);
}

PsiData to_psi_data(const ModelFile& mf, int h_prec, int p_prec) {
  WData model = to_wdata(mf, h_prec, p_prec);
  if (!mf.psi_h) return derive_psi_h(model);
  if (static_cast<int>(mf.psi_h->size()) != model.rank())
    fail(ErrorCode::model, "model file: psi_h must list exactly " +
                               std::to_string(model.rank()) + " coordinate polynomials");
  std::vector<HSeries> coords;
  for (size_t i = 0; i < mf.psi_h->size(); ++i)
    coords.push_back(
        to_hseries((*mf.psi_h)[i], model.params(), "psi_h[" + std::to_string(i) + "]"));
  ExtElement psi(model.ring(), std::move(coords));
  return PsiData(std::move(model), std::move(psi), false);
}

ModelFile from_psi_data(const PsiData& data, std::string provenance) {
  const WData& model = data.model();
  ModelFile mf;
  mf.schema = 1;
  mf.p = model.p();
  mf.level = model.level();
  mf.residue_degree = model.residue_degree();
  for (int i = 0; i < model.rank(); ++i)
    mf.w.push_back(to_sparse(model.w()[static_cast<size_t>(i)], "w[" + std::to_string(i) + "]"));
  std::vector<SparsePoly> coords;
  for (int k = 0; k < model.rank(); ++k)
    coords.push_back(to_sparse(data.psi_h().coord(k), "psi_h[" + std::to_string(k) + "]"));
  mf.psi_h = std::move(coords);
  mf.provenance = std::move(provenance);
  return mf;
}

ModelFile builtin_model() {
  ModelFile mf;
  mf.schema = 1;
  mf.p = 5;
  mf.level = 4;
  mf.residue_degree = 1;
  mf.w = {{{0, Int(5)}},  {{1, Int(-1)}}, {{0, Int(55)}},
          {{0, Int(-60)}}, {{0, Int(35)}}, {{0, Int(-10)}}};
  mf.provenance =
      "built-in model: level 4, prime 5; modulus of the degree-6 subgroup "
      "polynomial derived from the division polynomial of the level-4 curve";
  return mf;
}

}  // namespace heckeops

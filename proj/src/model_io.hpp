#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "power_ops.hpp"

namespace heckeops {

// Sparse polynomial in h: (exponent, coefficient) pairs, exponents ascending
// in canonical form. Model files carry integer coefficients only.
using SparsePoly = std::vector<std::pair<int, Int>>;

// On-disk description of a power-operation model (schema v1). Coefficients
// are serialized as decimal strings so arbitrary-precision integers survive
// the JSON round trip.
struct ModelFile {
  int schema = 1;
  Int p = 0;
  int level = 1;
  int residue_degree = 1;
  std::vector<SparsePoly> w;  // modulus coefficients w_0 .. w_p
  // Coordinates of psi(h) in the basis 1, alpha, ..., alpha^p. Optional: when
  // absent the loader derives psi(h) from the modulus, which needs w_0 and
  // w_2..w_p constant.
  std::optional<std::vector<SparsePoly>> psi_h;
  std::string provenance;
};

ModelFile parse_model_text(const std::string& text);
ModelFile read_model_file(const std::string& path);
std::string model_to_text(const ModelFile& mf);
void write_model_file(const ModelFile& mf, const std::string& path);

// Instantiates the modulus at working precision (h-truncation h_prec,
// p-adic precision p_prec), running the usual model validation.
WData to_wdata(const ModelFile& mf, int h_prec, int p_prec);

// Same, together with psi(h): stored coordinates are validated through the
// double-application identity; otherwise the image is derived.
PsiData to_psi_data(const ModelFile& mf, int h_prec, int p_prec);

// Serializable snapshot of a model, psi(h) included.
ModelFile from_psi_data(const PsiData& data, std::string provenance);

// The level-4 model at p = 5 compiled into the library; loads without a file.
ModelFile builtin_model();

}  // namespace heckeops

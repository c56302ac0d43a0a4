#pragma once

#include <optional>
#include <vector>

#include "power_ops.hpp"

namespace heckeops {

// Trace and norm coefficient systems attached to a modulus: c_i is the trace
// of alpha^i (a power sum of the roots), d_tau the norm-side companion data.
// Both are computed twice, by recursion and by closed form, and must agree.
struct CDVectors {
  WData model;
  std::vector<HSeries> c;  // c_0 .. c_p
  std::vector<HSeries> d;  // d_0 .. d_p
};

CDVectors compute_cd(const WData& model);

// Averaged power operations and the unit-group logarithm for one model.
// Holds shared evaluation caches; construct once and reuse when applying
// many operators to the same model.
class HeckeOps {
 public:
  explicit HeckeOps(const PsiData& data);

  const PsiData& data() const { return data_; }
  const CDVectors& cd() const { return cd_; }

  // (1/p) trace of the total power operation; evaluated both as an extension
  // trace and through the c-coefficients, which must agree exactly. The
  // result may carry a single p in coefficient denominators.
  HSeries t1(const HSeries& x);

  // x/p^2 by definition; the expansion through nested individual operations
  // weighted by w_0-powers and the d-coefficients must reproduce it.
  HSeries t2(const HSeries& x);

  // (1/p) trace of alpha^k times the total power operation.
  HSeries weighted_t1(const HSeries& x, int k);

  // (1/p) iwasawa_log(x^{p+1} / norm(psi x)) for units x; the division by p
  // must be exact.
  HSeries ell(const HSeries& x);

  // The same operation computed as (1 - t1 + p t2) applied to iwasawa_log x,
  // evaluated at deep padding since t1 of a full series needs tail terms.
  HSeries ell_operator_route(const HSeries& x);

 private:
  HSeries normalized(const HSeries& x) const;
  PsiApplier& deep();
  const std::vector<HSeries>& psi_power_traces();

  PsiData data_;
  CDVectors cd_;
  PsiApplier base_;
  HSeries::Params deep_work_;
  std::optional<PsiApplier> deep_;
  std::vector<HSeries> d_deep_;        // d-coefficients at the deep precision
  std::vector<HSeries> w0_pow_deep_;   // w_0 powers at the deep precision
  HSeries::Params pad_;
  std::vector<HSeries> traces_;        // Tr(psi(h)^b) at padded precision
};

// One-shot wrappers.
HSeries t1(const PsiData& data, const HSeries& x);
HSeries t2(const PsiData& data, const HSeries& x);
HSeries weighted_t1(const PsiData& data, const HSeries& x, int k);
HSeries ell(const PsiData& data, const HSeries& x);

}  // namespace heckeops

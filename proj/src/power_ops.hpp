#pragma once

#include <vector>

#include "ext.hpp"

namespace heckeops {

// Modulus data for the rank-(p+1) extension carrying the total power
// operation: w(alpha) = alpha^{p+1} + w_p alpha^p + ... + w_1 alpha + w_0
// with coefficients in Z_p[[h]].
class WData {
 public:
  WData(Int p, int level, std::vector<HSeries> w, int residue_degree = 1);

  const Int& p() const { return p_; }
  int level() const { return level_; }
  int residue_degree() const { return d_; }
  const std::vector<HSeries>& w() const { return w_; }
  int rank() const { return static_cast<int>(w_.size()); }
  HSeries::Params params() const { return w_[0].params(); }
  const ExtRingPtr& ring() const { return ring_; }

  // Same modulus re-expressed at another working precision.
  WData at_params(const HSeries::Params& pr) const;

 private:
  void validate() const;

  Int p_;
  int level_;
  int d_;
  std::vector<HSeries> w_;  // w_0 .. w_p
  ExtRingPtr ring_;
};

// A model together with the image of h under the total power operation,
// which determines the operation on all of Z_p[[h]] by continuity.
class PsiData {
 public:
  // Checks the alpha-degree bound and the double-application identity
  // (applying the operation twice with alpha sent to its companion must
  // return the identity map at working precision).
  PsiData(WData model, ExtElement psi_h, bool derived);

  const WData& model() const { return model_; }
  const ExtElement& psi_h() const { return psi_h_; }
  bool derived() const { return derived_; }

 private:
  WData model_;
  ExtElement psi_h_;
  bool derived_;
};

// Derives psi(h) from the modulus alone: with the companion element a~ of
// alpha, the image is a~^p + w_p a~^{p-1} + ... + w_2 a~ + alpha. Requires
// w_0 and w_2..w_p to be constants.
PsiData derive_psi_h(const WData& model);

// Evaluates the operation on x = sum c_b h^b as sum c_b psi(h)^b at the
// model's own precision (exact within the truncation quotient for
// polynomial inputs).
ExtElement apply_psi(const PsiData& data, const HSeries& x);

// The alpha^i-coordinate of apply_psi.
HSeries individual_Q(const PsiData& data, const HSeries& x, int i);

// Double application: extends the operation to the extension ring by
// sending alpha to its companion, applies it to apply_psi(x), checks that
// the higher coordinates vanish at precision M, and returns the scalar
// part. Contract: the result equals x at precision (M, L). Internally padded
// to a deeper truncation because the operation does not preserve the
// h-filtration.
HSeries phi(const PsiData& data, const HSeries& x);

// Reusable evaluation context at a chosen working precision. reduce_k > 0
// keeps all cached powers reduced mod p^reduce_k (callers add guard digits
// above M); 0 keeps exact rationals.
class PsiApplier {
 public:
  PsiApplier(const PsiData& data, const HSeries::Params& work, int reduce_k = 0);

  const HSeries::Params& params() const { return work_; }
  const ExtRingPtr& ring() const { return model_.ring(); }
  const WData& model() const { return model_; }
  const ExtElement& psi_h() const { return psi_h_; }

  ExtElement apply(const HSeries& x);
  // Coefficientwise application with alpha mapped to the companion element:
  // y = sum y_k alpha^k goes to sum apply(y_k) * companion^k.
  ExtElement apply_ext(const ExtElement& y);
  // apply_ext(apply(x)) with the collapse checks of phi, reported at `out`
  // precision. The working truncation must be deep enough for the caller's
  // input degree (phi picks p*(L-1)+2 for degree-(L-1) inputs).
  HSeries double_apply(const HSeries& x, const HSeries::Params& out);

 private:
  const ExtElement& power(int b);

  HSeries::Params work_;
  int reduce_k_;
  WData model_;
  ExtElement psi_h_;
  std::vector<ExtElement> powers_;
  std::vector<ExtElement> dual_powers_;
};

// Working precision used for double-application routes: truncation deep
// enough that dropped tail terms sit inside (p, h)^{L+M+4}.
HSeries::Params padded_params(const HSeries::Params& base);

}  // namespace heckeops

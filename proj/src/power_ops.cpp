#include "power_ops.hpp"

#include <algorithm>
#include <utility>

namespace heckeops {

namespace {

bool is_small_prime(const Int& p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

WData::WData(Int p, int level, std::vector<HSeries> w, int residue_degree)
    : p_(std::move(p)), level_(level), d_(residue_degree), w_(std::move(w)) {
  validate();
  ring_ = std::make_shared<const ExtRing>(params(), w_);
}

void WData::validate() const {
  if (p_ == 2) fail(ErrorCode::unsupported, "p = 2 models are not supported");
  if (!is_small_prime(p_) || p_ > 31)
    fail(ErrorCode::model, "model prime must be a small odd prime");
  if (d_ < 1) fail(ErrorCode::model, "residue degree must be positive");
  int pi = p_.convert_to<int>();
  if (static_cast<int>(w_.size()) != pi + 1)
    fail(ErrorCode::model, "expected p+1 modulus coefficients");
  HSeries::Params pr = w_[0].params();
  if (pr.p != p_) fail(ErrorCode::model, "modulus coefficients live over the wrong prime");
  for (const HSeries& wi : w_)
    if (wi.params().L != pr.L || wi.params().M != pr.M)
      fail(ErrorCode::model, "modulus coefficients disagree on working precision");
  for (int i = 0; i <= pi; ++i) {
    if (i == 1) continue;
    if (!w_[static_cast<size_t>(i)].divisible_by_p_power(1))
      fail(ErrorCode::model, "w_i must be divisible by p away from i = 1");
  }
  // Mod p the modulus must read alpha(alpha^p - h), so w_1 = -h there.
  if (!(w_[1] + HSeries::h(pr)).divisible_by_p_power(1))
    fail(ErrorCode::model, "w_1 must reduce to -h mod p");
  Rat c0 = w_[0].coeff(0);
  if (c0 == 0 || vp(c0, p_) != 1) fail(ErrorCode::model, "w_0 must be p times a unit");
}

WData WData::at_params(const HSeries::Params& pr) const {
  if (pr.p != p_) fail(ErrorCode::invalid_argument, "prime mismatch in precision change");
  std::vector<HSeries> w2;
  w2.reserve(w_.size());
  for (const HSeries& wi : w_) w2.push_back(wi.with_truncation(pr.L).with_pprec(pr.M));
  return WData(p_, level_, std::move(w2), d_);
}

PsiData::PsiData(WData model, ExtElement psi_h, bool derived)
    : model_(std::move(model)), psi_h_(std::move(psi_h)), derived_(derived) {
  if (psi_h_.ring() != model_.ring())
    fail(ErrorCode::model, "psi(h) must live in the model's extension ring");
  // rank p+1 coordinates bound the alpha-degree by p automatically; the real
  // consistency condition is that the involution squares to the identity,
  // checked on the generator at a truncation deep enough to make the double
  // image exact for a degree-1 input.
  HSeries::Params base = model_.params();
  int pi = model_.p().convert_to<int>();
  HSeries::Params check{base.p, pi * pi + 2, base.M + 2};
  PsiApplier ap(*this, check, check.M);
  HSeries back = ap.double_apply(HSeries::h(check), base);
  if (!back.congruent(HSeries::h(base)))
    fail(ErrorCode::model, "double application of psi does not return h");
}

PsiData derive_psi_h(const WData& model) {
  int pi = model.p().convert_to<int>();
  const std::vector<HSeries>& w = model.w();
  for (int i = 0; i <= pi; ++i) {
    if (i == 1) continue;
    if (w[static_cast<size_t>(i)].degree() > 0)
      fail(ErrorCode::unsupported,
           "derivation needs constant modulus coefficients away from w_1");
  }
  const ExtRingPtr& ring = model.ring();
  ExtElement dual = ext_dual(ring);
  // Horner form of dual^p + w_p dual^{p-1} + ... + w_2 dual + alpha.
  ExtElement acc = dual + ExtElement::scalar(ring, w[static_cast<size_t>(pi)]);
  for (int i = pi - 1; i >= 2; --i)
    acc = acc * dual + ExtElement::scalar(ring, w[static_cast<size_t>(i)]);
  acc = acc * dual + ExtElement::theta(ring);
  return PsiData(model, acc, true);
}

ExtElement apply_psi(const PsiData& data, const HSeries& x) {
  PsiApplier ap(data, data.model().params(), 0);
  return ap.apply(x);
}

HSeries individual_Q(const PsiData& data, const HSeries& x, int i) {
  if (i < 0 || i >= data.model().rank())
    fail(ErrorCode::invalid_argument, "operation index out of range");
  return apply_psi(data, x).coord(i);
}

HSeries phi(const PsiData& data, const HSeries& x) {
  HSeries::Params base = data.model().params();
  if (x.p() != base.p) fail(ErrorCode::invalid_argument, "prime mismatch in phi");
  int pi = data.model().p().convert_to<int>();
  // A degree-(L-1) input has a first image of degree at most p(L-1), so this
  // truncation makes both stages exact mod p^M up to every retained degree.
  HSeries::Params work{base.p, pi * (base.L - 1) + 2, base.M + 4};
  PsiApplier ap(data, work, work.M);
  return ap.double_apply(x.with_truncation(base.L).with_pprec(base.M), base);
}

namespace {
bool same_params(const HSeries::Params& a, const HSeries::Params& b) {
  return a.p == b.p && a.L == b.L && a.M == b.M;
}
}  // namespace

PsiApplier::PsiApplier(const PsiData& data, const HSeries::Params& work, int reduce_k)
    : work_(work), reduce_k_(reduce_k),
      model_(same_params(data.model().params(), work) ? data.model()
                                                     : data.model().at_params(work)),
      psi_h_(ExtElement::zero(model_.ring())) {
  std::vector<HSeries> coords;
  coords.reserve(data.psi_h().coords().size());
  for (const HSeries& c : data.psi_h().coords())
    coords.push_back(c.with_truncation(work.L).with_pprec(work.M));
  psi_h_ = ExtElement(model_.ring(), std::move(coords));
  if (reduce_k_ > 0) psi_h_ = psi_h_.reduced_mod_p_power(reduce_k_);
  powers_.push_back(ExtElement::scalar(model_.ring(), Rat(1)));
  powers_.push_back(psi_h_);
}

const ExtElement& PsiApplier::power(int b) {
  while (static_cast<int>(powers_.size()) <= b) {
    ExtElement next = powers_.back() * psi_h_;
    if (reduce_k_ > 0) next = next.reduced_mod_p_power(reduce_k_);
    powers_.push_back(std::move(next));
  }
  return powers_[static_cast<size_t>(b)];
}

ExtElement PsiApplier::apply(const HSeries& x) {
  if (x.p() != work_.p) fail(ErrorCode::invalid_argument, "prime mismatch in application");
  HSeries xw = x.with_truncation(work_.L).with_pprec(work_.M);
  ExtElement acc = ExtElement::zero(model_.ring());
  for (int b = 0; b <= xw.degree(); ++b) {
    Rat c = xw.coeff(b);
    if (c == 0) continue;
    acc = acc + power(b).scale(c);
  }
  if (reduce_k_ > 0) acc = acc.reduced_mod_p_power(reduce_k_);
  return acc;
}

ExtElement PsiApplier::apply_ext(const ExtElement& y) {
  if (y.ring()->rank() != model_.rank())
    fail(ErrorCode::invalid_argument, "rank mismatch in extension application");
  if (dual_powers_.empty()) {
    dual_powers_.push_back(ExtElement::scalar(model_.ring(), Rat(1)));
    ExtElement dual = ext_dual(model_.ring());
    if (reduce_k_ > 0) dual = dual.reduced_mod_p_power(reduce_k_);
    for (int k = 1; k < model_.rank(); ++k) {
      ExtElement next = dual_powers_.back() * dual;
      if (reduce_k_ > 0) next = next.reduced_mod_p_power(reduce_k_);
      dual_powers_.push_back(std::move(next));
    }
  }
  ExtElement acc = ExtElement::zero(model_.ring());
  for (int k = 0; k < model_.rank(); ++k) {
    const HSeries& yk = y.coord(k);
    if (yk.is_zero()) continue;
    acc = acc + apply(yk) * dual_powers_[static_cast<size_t>(k)];
  }
  if (reduce_k_ > 0) acc = acc.reduced_mod_p_power(reduce_k_);
  return acc;
}

HSeries PsiApplier::double_apply(const HSeries& x, const HSeries::Params& out) {
  ExtElement z = apply_ext(apply(x));
  int check_m = std::min(out.M, work_.M);
  for (int k = 1; k < model_.rank(); ++k)
    if (!z.coord(k).reduced_mod_p_power(check_m).is_zero())
      fail(ErrorCode::model, "double application of psi does not collapse to the base ring");
  return z.coord(0).with_truncation(out.L).with_pprec(out.M);
}

HSeries::Params padded_params(const HSeries::Params& base) {
  int pp1 = base.p.convert_to<int>() + 1;
  return {base.p, pp1 * (base.L + base.M + 4), base.M + 6};
}

}  // namespace heckeops

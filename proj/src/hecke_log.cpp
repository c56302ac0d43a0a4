#include "hecke_log.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace heckeops {

namespace {

int as_int(const Int& v) { return v.convert_to<int>(); }

Int factorial(int k) {
  Int f = 1;
  for (int t = 2; t <= k; ++t) f *= t;
  return f;
}

}  // namespace

CDVectors compute_cd(const WData& model) {
  const HSeries::Params pr = model.params();
  const int pi = as_int(model.p());
  const int N = model.rank();  // p + 1
  const auto& w = model.w();
  const HSeries zero = HSeries::zero(pr);
  const HSeries one = HSeries::constant(pr, Rat(1));

  // c_i = Tr(alpha^i) is the i-th power sum of the roots of the modulus.
  // Newton recursion: s_i = -sum_{j=1}^{i-1} w_{N-j} s_{i-j} - i w_{N-i}.
  std::vector<HSeries> c(static_cast<size_t>(N), zero);
  c[0] = HSeries::constant(pr, Rat(N));
  for (int i = 1; i <= pi; ++i) {
    HSeries acc = zero;
    for (int j = 1; j <= i - 1; ++j)
      acc = acc + w[static_cast<size_t>(N - j)] * c[static_cast<size_t>(i - j)];
    c[static_cast<size_t>(i)] = -(acc + w[static_cast<size_t>(N - i)] * Rat(i));
  }

  // Girard's closed form for the same power sums:
  // s_n = n sum over (m_1..m_n) with sum i m_i = n of
  //       (-1)^{|m|} (|m|-1)!/prod m_i!  prod w_{N-i}^{m_i}.
  for (int n = 1; n <= pi; ++n) {
    HSeries total = zero;
    std::function<void(int, int, int, const HSeries&, const Int&)> rec =
        [&](int remaining, int max_part, int count, const HSeries& prod, const Int& mfact) {
          if (remaining == 0) {
            Rat coeff = Rat(factorial(count - 1)) / Rat(mfact);
            if (count % 2) coeff = -coeff;  // (-1)^{|m|}
            total = total + prod * coeff;
            return;
          }
          for (int part = std::min(remaining, max_part); part >= 1; --part) {
            HSeries acc = prod;
            Int mf = mfact;
            const int max_mult = remaining / part;
            for (int mult = 1; mult <= max_mult; ++mult) {
              acc = acc * w[static_cast<size_t>(N - part)];
              mf *= mult;
              rec(remaining - part * mult, part - 1, count + mult, acc, mf);
            }
          }
        };
    rec(n, n, 0, one, Int(1));
    if (!(total * Rat(n)).equals_exact(c[static_cast<size_t>(n)]))
      fail(ErrorCode::internal, "trace coefficients: recursion and closed form disagree");
  }

  // d recursion: d_0 = 1, d_t = -sum_{k<t} w_0^{t-k-1} w_{t-k} d_k, where
  // terms with w-index above p do not occur.
  std::vector<HSeries> d(static_cast<size_t>(N), zero);
  d[0] = one;
  for (int t = 1; t <= pi; ++t) {
    HSeries acc = zero;
    for (int k = 0; k < t; ++k) {
      const int idx = t - k;
      if (idx > pi) continue;
      acc = acc + w[0].pow(t - k - 1) * w[static_cast<size_t>(idx)] * d[static_cast<size_t>(k)];
    }
    d[static_cast<size_t>(t)] = -acc;
  }

  // Closed form by unrolling: sum over compositions (i_1..i_k) of t with
  // parts between 1 and p of (-1)^k w_{i_1} ... w_{i_k} w_0^{t-k}.
  for (int t = 1; t <= pi; ++t) {
    HSeries total = zero;
    std::function<void(int, int, const HSeries&)> rec = [&](int remaining, int count,
                                                            const HSeries& prod) {
      if (remaining == 0) {
        const HSeries term = prod * w[0].pow(t - count);
        total = (count % 2) ? total - term : total + term;
        return;
      }
      for (int part = 1; part <= std::min(remaining, pi); ++part)
        rec(remaining - part, count + 1, prod * w[static_cast<size_t>(part)]);
    };
    rec(t, 0, one);
    if (!total.equals_exact(d[static_cast<size_t>(t)]))
      fail(ErrorCode::internal, "norm coefficients: recursion and closed form disagree");
  }

  return CDVectors{model, std::move(c), std::move(d)};
}

HeckeOps::HeckeOps(const PsiData& data)
    : data_(data),
      cd_(compute_cd(data_.model())),
      base_(data_, data_.model().params(), 0),
      pad_(padded_params(data_.model().params())) {
  const HSeries::Params pr = data_.model().params();
  deep_work_ = HSeries::Params{pr.p, as_int(pr.p) * (pr.L - 1) + 2, pr.M + 4};
}

HSeries HeckeOps::normalized(const HSeries& x) const {
  const HSeries::Params pr = data_.model().params();
  if (x.p() != pr.p) fail(ErrorCode::invalid_argument, "series prime differs from the model prime");
  return x.with_truncation(pr.L).with_pprec(pr.M);
}

PsiApplier& HeckeOps::deep() {
  if (!deep_) {
    deep_.emplace(data_, deep_work_, deep_work_.M);
    const auto& w = data_.model().w();
    const int pi = as_int(data_.model().p());
    const HSeries w0 = w[0].with_truncation(deep_work_.L).with_pprec(deep_work_.M);
    w0_pow_deep_.assign(1, HSeries::constant(deep_work_, Rat(1)));
    for (int i = 1; i <= pi; ++i) w0_pow_deep_.push_back(w0_pow_deep_.back() * w0);
    d_deep_.clear();
    for (const auto& dk : cd_.d)
      d_deep_.push_back(dk.with_truncation(deep_work_.L).with_pprec(deep_work_.M));
  }
  return *deep_;
}

HSeries HeckeOps::t1(const HSeries& x) {
  const HSeries xb = normalized(x);
  const ExtElement px = base_.apply(xb);
  const HSeries tr = px.trace();
  HSeries via_c = HSeries::zero(xb.params());
  for (int i = 0; i < data_.model().rank(); ++i)
    via_c = via_c + cd_.c[static_cast<size_t>(i)] * px.coord(i);
  if (!tr.equals_exact(via_c))
    fail(ErrorCode::internal, "trace route and coefficient route disagree");
  return tr * (Rat(1) / Rat(data_.model().p()));
}

HSeries HeckeOps::t2(const HSeries& x) {
  const HSeries::Params pr = data_.model().params();
  const HSeries xb = normalized(x);
  const Rat inv_p2 = Rat(1) / Rat(data_.model().p() * data_.model().p());
  const HSeries definition = xb * inv_p2;

  // Independent route: expand p^2 t2 = sum_{i<=j} w_0^i d_{j-i} Q_i Q_j at a
  // truncation deep enough for the nested application.
  PsiApplier& ap = deep();
  const int pi = as_int(data_.model().p());
  const ExtElement first = ap.apply(xb);
  HSeries sum = HSeries::zero(deep_work_);
  for (int j = 0; j <= pi; ++j) {
    const ExtElement second = ap.apply(first.coord(j));
    for (int i = 0; i <= j; ++i) {
      sum = sum + w0_pow_deep_[static_cast<size_t>(i)] * d_deep_[static_cast<size_t>(j - i)] *
                      second.coord(i);
    }
  }
  const HSeries route = (sum * inv_p2).with_truncation(pr.L).with_pprec(pr.M);
  if (!route.congruent(definition))
    fail(ErrorCode::internal, "nested operator route fails to reproduce x / p^2");
  return definition;
}

HSeries HeckeOps::weighted_t1(const HSeries& x, int k) {
  if (k < 0) fail(ErrorCode::invalid_argument, "weight exponent must be nonnegative");
  const HSeries xb = normalized(x);
  const ExtElement px = base_.apply(xb);
  const ExtElement weighted = ExtElement::theta(data_.model().ring()).pow(k) * px;
  return weighted.trace() * (Rat(1) / Rat(data_.model().p()));
}

HSeries HeckeOps::ell(const HSeries& x) {
  const HSeries xb = normalized(x);
  if (!xb.is_unit()) fail(ErrorCode::invalid_argument, "logarithm is defined on units only");
  const ExtElement px = base_.apply(xb);
  const HSeries u = xb.pow(as_int(data_.model().p()) + 1) * px.norm().invert();
  const HSeries lg = iwasawa_log(u, data_.model().residue_degree());
  if (!lg.divisible_by_p_power(1))
    fail(ErrorCode::precision, "logarithm image is not divisible by p");
  return lg.div_by_p_power(1);
}

const std::vector<HSeries>& HeckeOps::psi_power_traces() {
  if (!traces_.empty()) return traces_;
  const int r = data_.model().rank();

  // First r power traces of psi(h), computed with exact coefficients; the
  // symmetric functions e_k then come from Newton's identities (the division
  // by k is only valid on exact values, not mod-p^M representatives).
  PsiApplier exact(data_, pad_, 0);
  std::vector<HSeries> s(static_cast<size_t>(pad_.L), HSeries::zero(pad_));
  std::vector<HSeries> e(static_cast<size_t>(r + 1), HSeries::zero(pad_));
  s[0] = HSeries::constant(pad_, Rat(r));
  e[0] = HSeries::constant(pad_, Rat(1));
  for (int k = 1; k <= r; ++k) {
    s[static_cast<size_t>(k)] = exact.apply(HSeries::monomial(pad_, k, Rat(1))).trace();
    HSeries acc = HSeries::zero(pad_);
    for (int j = 0; j < k; ++j) {
      const HSeries term = e[static_cast<size_t>(j)] * s[static_cast<size_t>(k - j)];
      acc = (j % 2) ? acc - term : acc + term;
    }
    const HSeries ek = acc * (Rat((k % 2) ? 1 : -1) / Rat(k));
    if (!ek.p_integral())
      fail(ErrorCode::internal, "symmetric functions of the operation image are not integral");
    e[static_cast<size_t>(k)] = ek.reduced_mod_p_power(pad_.M);
  }
  for (int k = 1; k <= r; ++k)
    s[static_cast<size_t>(k)] = s[static_cast<size_t>(k)].reduced_mod_p_power(pad_.M);

  // Cayley-Hamilton gives s_b = sum_{k=1}^{r} (-1)^{k+1} e_k s_{b-k}.
  for (int b = r + 1; b < pad_.L; ++b) {
    HSeries acc = HSeries::zero(pad_);
    for (int k = 1; k <= r; ++k) {
      const HSeries term = e[static_cast<size_t>(k)] * s[static_cast<size_t>(b - k)];
      acc = (k % 2) ? acc + term : acc - term;
    }
    s[static_cast<size_t>(b)] = acc.reduced_mod_p_power(pad_.M);
  }
  traces_ = std::move(s);
  return traces_;
}

HSeries HeckeOps::ell_operator_route(const HSeries& x) {
  const HSeries::Params pr = data_.model().params();
  const HSeries xb = normalized(x);
  if (!xb.is_unit()) fail(ErrorCode::invalid_argument, "logarithm is defined on units only");

  // (1 - t1 + p t2) applied to iwasawa_log x. Since t2 halves nothing and
  // phi is the identity, p t2 contributes u/p; t1 on the full log series is
  // evaluated through the power traces at padded precision, which covers the
  // tail terms the base truncation would drop.
  const HSeries xp = xb.with_truncation(pad_.L).with_pprec(pad_.M);
  const HSeries u = iwasawa_log(xp, data_.model().residue_degree());
  const auto& s = psi_power_traces();
  HSeries trace_of_psi_u = HSeries::zero(pad_);
  for (int b = 0; b <= u.degree(); ++b) {
    const Rat cb = u.coeff(b);
    if (cb == 0) continue;
    trace_of_psi_u = trace_of_psi_u + s[static_cast<size_t>(b)] * cb;
  }
  const Rat inv_p = Rat(1) / Rat(data_.model().p());
  const HSeries res = u * (Rat(1) + inv_p) - trace_of_psi_u * inv_p;
  return res.with_truncation(pr.L).with_pprec(pr.M);
}

HSeries t1(const PsiData& data, const HSeries& x) { return HeckeOps(data).t1(x); }
HSeries t2(const PsiData& data, const HSeries& x) { return HeckeOps(data).t2(x); }
HSeries weighted_t1(const PsiData& data, const HSeries& x, int k) {
  return HeckeOps(data).weighted_t1(x, k);
}
HSeries ell(const PsiData& data, const HSeries& x) { return HeckeOps(data).ell(x); }

}  // namespace heckeops

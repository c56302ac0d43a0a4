#include "dyer_lashof.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace heckeops {

namespace {
constexpr long kRewriteBudget = 1000000;
}

bool GammaWord::admissible() const {
  bool seen_positive = false;
  for (int g : gens) {
    if (g == 0) {
      if (seen_positive) return false;
    } else {
      seen_positive = true;
    }
  }
  return true;
}

std::string GammaWord::to_string() const {
  if (gens.empty()) return "1";
  std::string s;
  for (size_t k = 0; k < gens.size(); ++k) {
    if (k) s += " ";
    s += "Q" + std::to_string(gens[k]);
  }
  return s;
}

bool operator<(const GammaWord& a, const GammaWord& b) {
  if (a.gens.size() != b.gens.size()) return a.gens.size() < b.gens.size();
  return a.gens < b.gens;
}

bool operator==(const GammaWord& a, const GammaWord& b) { return a.gens == b.gens; }

HSeries GammaElement::coeff(const GammaWord& w) const {
  auto it = terms_.find(w);
  if (it == terms_.end()) return HSeries::zero(params_);
  return it->second;
}

void GammaElement::add_term(const GammaWord& w, const HSeries& c) {
  if (!w.admissible()) fail(ErrorCode::invalid_argument, "word is not admissible");
  if (c.is_zero()) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

GammaElement GammaElement::operator+(const GammaElement& o) const {
  GammaElement r(params_.p != 0 ? params_ : o.params_);
  for (const auto& [w, c] : terms_) r.add_term(w, c);
  for (const auto& [w, c] : o.terms_) r.add_term(w, c);
  return r;
}

GammaElement GammaElement::operator-(const GammaElement& o) const {
  GammaElement r(params_.p != 0 ? params_ : o.params_);
  for (const auto& [w, c] : terms_) r.add_term(w, c);
  for (const auto& [w, c] : o.terms_) r.add_term(w, -c);
  return r;
}

GammaElement GammaElement::scale(const HSeries& c) const {
  GammaElement r(params_);
  for (const auto& [w, cw] : terms_) r.add_term(w, c * cw);
  return r;
}

bool GammaElement::equals_exact(const GammaElement& o) const { return (*this - o).is_zero(); }

bool GammaElement::congruent(const GammaElement& o) const {
  std::set<GammaWord> keys;
  for (const auto& [w, c] : terms_) keys.insert(w);
  for (const auto& [w, c] : o.terms_) keys.insert(w);
  for (const GammaWord& w : keys)
    if (!coeff(w).congruent(o.coeff(w))) return false;
  return true;
}

bool GammaElement::homogeneous(int d) const {
  for (const auto& [w, c] : terms_)
    if (w.degree() != d) return false;
  return true;
}

std::string GammaElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ") " + w.to_string();
  }
  return s;
}

GammaToken GammaToken::generator(int i) {
  GammaToken t;
  t.is_gen = true;
  t.gen = i;
  return t;
}

GammaToken GammaToken::coefficient(HSeries s) {
  GammaToken t;
  t.is_gen = false;
  t.scalar = std::move(s);
  return t;
}

GammaPresentation::GammaPresentation(const PsiData& data)
    : data_(data), base_(data_, data_.model().params(), 0), cd_(compute_cd(data_.model())) {
  const HSeries::Params pr = data_.model().params();
  const int pi = data_.model().p().convert_to<int>();
  const int n = pi + 1;
  const ExtRingPtr& ring = data_.model().ring();
  const HSeries one = HSeries::constant(pr, Rat(1));

  theta_pow_.reserve(static_cast<size_t>(2 * pi) + 1);
  theta_pow_.push_back(ExtElement::scalar(ring, Rat(1)));
  const ExtElement th = ExtElement::theta(ring);
  for (int s = 1; s <= 2 * pi; ++s) theta_pow_.push_back(theta_pow_.back() * th);

  // Commutation past h: Q_k h = sum_j [psi(h) alpha^j]_k Q_j.
  comm_.assign(static_cast<size_t>(n), std::vector<HSeries>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    const ExtElement col = data_.psi_h() * theta_pow_[static_cast<size_t>(j)];
    for (int k = 0; k < n; ++k) comm_[static_cast<size_t>(k)][static_cast<size_t>(j)] = col.coord(k);
  }

  // Adem rules: expanding the double application as
  // sum_{i,j} Q_i Q_j(x) alpha^i dual^j, every alpha^k coordinate with k >= 1
  // must vanish. The j = 0 block contributes Q_k Q_0 with unit coefficient,
  // the rest moves to the right-hand side.
  for (int i = 0; i < n; ++i)
    for (int k = 1; k < n; ++k) {
      const HSeries lead = theta_pow_[static_cast<size_t>(i)].coord(k);
      const bool normalized = (i == k) ? lead.equals_exact(one) : lead.is_zero();
      if (!normalized) fail(ErrorCode::model, "leading Adem coefficient is not normalized");
    }
  const auto dual_pow = dual_power_expansion(ring, n);
  adem_.assign(static_cast<size_t>(pi), GammaElement(pr));
  for (int i = 0; i <= pi; ++i)
    for (int j = 1; j <= pi; ++j) {
      const ExtElement prod = theta_pow_[static_cast<size_t>(i)] * dual_pow[static_cast<size_t>(j)];
      for (int k = 1; k <= pi; ++k) {
        const HSeries c = prod.coord(k);
        if (!c.is_zero()) adem_[static_cast<size_t>(k - 1)].add_term(GammaWord{{i, j}}, -c);
      }
    }

  // Cartan coefficients: alpha^s reduced to the basis.
  cartan_.assign(static_cast<size_t>(2 * pi) + 1, std::vector<HSeries>(static_cast<size_t>(n)));
  for (int s = 0; s <= 2 * pi; ++s)
    for (int k = 0; k < n; ++k)
      cartan_[static_cast<size_t>(s)][static_cast<size_t>(k)] =
          theta_pow_[static_cast<size_t>(s)].coord(k);
}

const GammaElement& GammaPresentation::adem(int k) const {
  const int pi = data_.model().p().convert_to<int>();
  if (k < 1 || k > pi) fail(ErrorCode::invalid_argument, "Adem rules exist for Q_k Q_0 with 1 <= k <= p");
  return adem_[static_cast<size_t>(k - 1)];
}

std::vector<std::vector<HSeries>> GammaPresentation::scalar_move_matrix(const HSeries& f) const {
  const int n = data_.model().rank();
  if (f.equals_exact(HSeries::h(data_.model().params()))) return comm_;
  const ExtElement pf = base_.apply(f);
  std::vector<std::vector<HSeries>> M(static_cast<size_t>(n), std::vector<HSeries>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    const ExtElement col = pf * theta_pow_[static_cast<size_t>(j)];
    for (int i = 0; i < n; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(j)] = col.coord(i);
  }
  return M;
}

namespace {

struct RawTerm {
  HSeries coeff;
  TokenWord tail;
};

// Folds leading scalars into the coefficient, merges adjacent scalars and
// drops factors equal to 1. Returns false when the term vanishes.
bool canonicalize(RawTerm& t, const HSeries& one) {
  TokenWord out;
  out.reserve(t.tail.size());
  for (GammaToken& tok : t.tail) {
    if (tok.is_gen) {
      out.push_back(std::move(tok));
      continue;
    }
    if (tok.scalar.is_zero()) return false;
    if (out.empty()) {
      t.coeff = t.coeff * tok.scalar;
    } else if (!out.back().is_gen) {
      out.back().scalar = out.back().scalar * tok.scalar;
      if (out.back().scalar.is_zero()) return false;
    } else if (!tok.scalar.equals_exact(one)) {
      out.push_back(std::move(tok));
    }
  }
  t.tail = std::move(out);
  return !t.coeff.is_zero();
}

int find_redex(const TokenWord& tail, RewriteOrder order) {
  int found = -1;
  const int m = static_cast<int>(tail.size());
  for (int t = 0; t < m; ++t) {
    bool redex;
    if (!tail[static_cast<size_t>(t)].is_gen) {
      redex = t > 0;  // canonical form guarantees a generator on the left
    } else {
      redex = tail[static_cast<size_t>(t)].gen >= 1 && t + 1 < m &&
              tail[static_cast<size_t>(t + 1)].is_gen &&
              tail[static_cast<size_t>(t + 1)].gen == 0;
    }
    if (redex) {
      if (order == RewriteOrder::leftmost) return t;
      found = t;
    }
  }
  return found;
}

}  // namespace

GammaElement GammaPresentation::rewrite(const TokenWord& word, RewriteOrder order) const {
  const HSeries::Params pr = data_.model().params();
  const int n = data_.model().rank();
  const HSeries one = HSeries::constant(pr, Rat(1));

  TokenWord start_tokens;
  start_tokens.reserve(word.size());
  size_t degree = 0;
  for (const GammaToken& tok : word) {
    if (tok.is_gen) {
      if (tok.gen < 0 || tok.gen >= n)
        fail(ErrorCode::invalid_argument, "generator index out of range");
      ++degree;
      start_tokens.push_back(tok);
    } else {
      if (tok.scalar.p() != pr.p)
        fail(ErrorCode::invalid_argument, "scalar prime differs from the model prime");
      start_tokens.push_back(
          GammaToken::coefficient(tok.scalar.with_truncation(pr.L).with_pprec(pr.M)));
    }
  }

  GammaElement result(pr);
  std::vector<RawTerm> work;
  RawTerm start{one, std::move(start_tokens)};
  if (canonicalize(start, one)) work.push_back(std::move(start));

  long budget = kRewriteBudget;
  while (!work.empty()) {
    RawTerm t = std::move(work.back());
    work.pop_back();
    const int pos = find_redex(t.tail, order);
    if (pos < 0) {
      GammaWord w;
      w.gens.reserve(t.tail.size());
      for (const GammaToken& tok : t.tail) w.gens.push_back(tok.gen);
      if (w.gens.size() != degree)
        fail(ErrorCode::internal, "rewriting changed the word-length degree");
      if (!w.admissible()) fail(ErrorCode::internal, "redex-free word is not admissible");
      result.add_term(w, t.coeff);
      continue;
    }
    if (--budget < 0) fail(ErrorCode::internal, "rewrite budget exceeded");

    const size_t upos = static_cast<size_t>(pos);
    if (!t.tail[upos].is_gen) {
      // move the scalar leftward over the generator before it
      const int i = t.tail[upos - 1].gen;
      const auto M = scalar_move_matrix(t.tail[upos].scalar);
      for (int j = 0; j < n; ++j) {
        const HSeries& mij = M[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (mij.is_zero()) continue;
        RawTerm nt;
        nt.coeff = t.coeff;
        nt.tail.assign(t.tail.begin(), t.tail.begin() + pos - 1);
        nt.tail.push_back(GammaToken::coefficient(mij));
        nt.tail.push_back(GammaToken::generator(j));
        nt.tail.insert(nt.tail.end(), t.tail.begin() + pos + 1, t.tail.end());
        if (canonicalize(nt, one)) work.push_back(std::move(nt));
      }
    } else {
      // Q_k Q_0 with k >= 1: substitute the Adem right-hand side
      const GammaElement& rhs = adem(t.tail[upos].gen);
      for (const auto& [w2, c2] : rhs.terms()) {
        RawTerm nt;
        nt.coeff = t.coeff;
        nt.tail.assign(t.tail.begin(), t.tail.begin() + pos);
        nt.tail.push_back(GammaToken::coefficient(c2));
        nt.tail.push_back(GammaToken::generator(w2.gens[0]));
        nt.tail.push_back(GammaToken::generator(w2.gens[1]));
        nt.tail.insert(nt.tail.end(), t.tail.begin() + pos + 2, t.tail.end());
        if (canonicalize(nt, one)) work.push_back(std::move(nt));
      }
    }
  }
  return result;
}

GammaElement GammaPresentation::product(const GammaElement& a, const GammaElement& b,
                                        RewriteOrder order) const {
  GammaElement out(data_.model().params());
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms()) {
      TokenWord tw;
      tw.reserve(wa.gens.size() + wb.gens.size() + 2);
      tw.push_back(GammaToken::coefficient(ca));
      for (int g : wa.gens) tw.push_back(GammaToken::generator(g));
      tw.push_back(GammaToken::coefficient(cb));
      for (int g : wb.gens) tw.push_back(GammaToken::generator(g));
      out = out + rewrite(tw, order);
    }
  return out;
}

GammaElement GammaPresentation::commutator(const GammaElement& a, const GammaElement& b) const {
  return product(a, b) - product(b, a);
}

GammaElement GammaPresentation::t_gamma(int which) const {
  const HSeries::Params pr = data_.model().params();
  const int pi = data_.model().p().convert_to<int>();
  GammaElement out(pr);
  if (which == 1) {
    for (int i = 0; i <= pi; ++i) out.add_term(GammaWord{{i}}, cd_.c[static_cast<size_t>(i)]);
  } else if (which == 2) {
    const HSeries& w0 = data_.model().w()[0];
    for (int i = 0; i <= pi; ++i)
      for (int j = i; j <= pi; ++j)
        out.add_term(GammaWord{{i, j}}, w0.pow(i) * cd_.d[static_cast<size_t>(j - i)]);
  } else {
    fail(ErrorCode::invalid_argument, "t index must be 1 or 2");
  }
  return out;
}

std::string GammaPresentation::report() const {
  const int pi = data_.model().p().convert_to<int>();
  const int n = pi + 1;
  std::string s;

  s += "commutation\n";
  for (int k = 0; k < n; ++k) {
    s += "  Q" + std::to_string(k) + " h =";
    bool first = true;
    for (int j = 0; j < n; ++j) {
      const HSeries& c = comm_[static_cast<size_t>(k)][static_cast<size_t>(j)];
      if (c.is_zero()) continue;
      s += first ? " " : " + ";
      s += "(" + c.to_string() + ") Q" + std::to_string(j);
      first = false;
    }
    s += "\n";
  }

  s += "adem\n";
  for (int k = 1; k <= pi; ++k)
    s += "  Q" + std::to_string(k) + " Q0 = " + adem(k).to_string() + "\n";

  s += "cartan\n";
  for (int sdeg = 0; sdeg <= 2 * pi; ++sdeg) {
    s += "  s=" + std::to_string(sdeg) + ":";
    bool first = true;
    for (int k = 0; k < n; ++k) {
      const HSeries& c = cartan_[static_cast<size_t>(sdeg)][static_cast<size_t>(k)];
      if (c.is_zero()) continue;
      s += first ? " " : " + ";
      s += "(" + c.to_string() + ") Q" + std::to_string(k);
      first = false;
    }
    s += "\n";
  }
  return s;
}

std::vector<std::vector<HSeries>> commutation_matrix(const PsiData& data) {
  return GammaPresentation(data).commutation();
}

std::vector<GammaElement> adem_relations(const PsiData& data) {
  GammaPresentation g(data);
  std::vector<GammaElement> out;
  const int pi = data.model().p().convert_to<int>();
  for (int k = 1; k <= pi; ++k) out.push_back(g.adem(k));
  return out;
}

std::vector<std::vector<HSeries>> cartan_tensor(const PsiData& data) {
  return GammaPresentation(data).cartan();
}

GammaElement t_gamma(const PsiData& data, int which) {
  return GammaPresentation(data).t_gamma(which);
}

GammaElement commutator(const PsiData& data, const GammaElement& a, const GammaElement& b) {
  return GammaPresentation(data).commutator(a, b);
}

}  // namespace heckeops

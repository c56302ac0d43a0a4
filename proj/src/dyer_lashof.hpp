#pragma once

#include <map>
#include <string>
#include <vector>

#include "hecke_log.hpp"

namespace heckeops {

// Word in the generators Q_0..Q_p. Admissible words carry all Q_0 factors as
// a leading prefix; the admissible words form a module basis.
struct GammaWord {
  std::vector<int> gens;

  bool admissible() const;
  int degree() const { return static_cast<int>(gens.size()); }
  std::string to_string() const;
};

bool operator<(const GammaWord& a, const GammaWord& b);
bool operator==(const GammaWord& a, const GammaWord& b);

// Finitely supported left-module element over the coefficient ring: a map
// from admissible words to series coefficients, zero coefficients pruned.
class GammaElement {
 public:
  GammaElement() = default;
  explicit GammaElement(const HSeries::Params& params) : params_(params) {}

  const HSeries::Params& params() const { return params_; }
  const std::map<GammaWord, HSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  HSeries coeff(const GammaWord& w) const;

  // Accumulates c on w; the word must be admissible.
  void add_term(const GammaWord& w, const HSeries& c);

  GammaElement operator+(const GammaElement& o) const;
  GammaElement operator-(const GammaElement& o) const;
  GammaElement scale(const HSeries& c) const;

  bool equals_exact(const GammaElement& o) const;
  bool congruent(const GammaElement& o) const;
  // All words have length d (vacuously true when zero).
  bool homogeneous(int d) const;

  std::string to_string() const;

 private:
  HSeries::Params params_;
  std::map<GammaWord, HSeries> terms_;
};

// One factor of a raw, not yet rewritten word: either a generator or an
// interleaved scalar.
struct GammaToken {
  bool is_gen = false;
  int gen = 0;
  HSeries scalar;

  static GammaToken generator(int i);
  static GammaToken coefficient(HSeries s);
};

using TokenWord = std::vector<GammaToken>;

// Which redex gets contracted first. Both orders reach the same normal form
// (checked empirically by the overlap tests); the knob exists to make that
// comparison possible.
enum class RewriteOrder { leftmost, rightmost };

// Generated presentation of the algebra of power operations for one model:
// commutation past scalars, Adem rules for Q_k Q_0, Cartan coefficients, and
// the induced rewriting to the admissible basis. Tables are built once in
// the constructor and only read afterwards.
class GammaPresentation {
 public:
  explicit GammaPresentation(const PsiData& data);

  const PsiData& data() const { return data_; }

  // Q_k h = sum_j commutation()[k][j] Q_j.
  const std::vector<std::vector<HSeries>>& commutation() const { return comm_; }
  // Right-hand side of Q_k Q_0 for k = 1..p.
  const GammaElement& adem(int k) const;
  // Q_k(xy) = sum_{i+j=s} cartan()[s][k] Q_i(x) Q_j(y), 0 <= s <= 2p.
  const std::vector<std::vector<HSeries>>& cartan() const { return cartan_; }

  // Matrix moving one scalar leftward: Q_i f = sum_j M[i][j] Q_j.
  std::vector<std::vector<HSeries>> scalar_move_matrix(const HSeries& f) const;

  GammaElement rewrite(const TokenWord& word,
                       RewriteOrder order = RewriteOrder::leftmost) const;
  GammaElement product(const GammaElement& a, const GammaElement& b,
                       RewriteOrder order = RewriteOrder::leftmost) const;
  GammaElement commutator(const GammaElement& a, const GammaElement& b) const;

  // which = 1: sum c_i Q_i; which = 2: sum_{i<=j} w_0^i d_{j-i} Q_i Q_j.
  GammaElement t_gamma(int which) const;

  // Printable presentation: commutation, Adem and Cartan sections.
  std::string report() const;

 private:
  PsiData data_;
  mutable PsiApplier base_;
  CDVectors cd_;
  std::vector<ExtElement> theta_pow_;  // theta^0 .. theta^{2p}
  std::vector<std::vector<HSeries>> comm_;
  std::vector<GammaElement> adem_;     // index k-1 holds the rule for Q_k Q_0
  std::vector<std::vector<HSeries>> cartan_;
};

// One-shot wrappers.
std::vector<std::vector<HSeries>> commutation_matrix(const PsiData& data);
std::vector<GammaElement> adem_relations(const PsiData& data);
std::vector<std::vector<HSeries>> cartan_tensor(const PsiData& data);
GammaElement t_gamma(const PsiData& data, int which);
GammaElement commutator(const PsiData& data, const GammaElement& a, const GammaElement& b);

}  // namespace heckeops

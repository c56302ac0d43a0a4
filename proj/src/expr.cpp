#include "expr.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <vector>

namespace heckeops {

namespace {

enum class TokKind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  TokKind kind;
  size_t pos;  // 1-based character position
  std::string text;
  Int value;
};

[[noreturn]] void syntax_error(const std::string& what, size_t pos) {
  fail(ErrorCode::parse, what + " at position " + std::to_string(pos));
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const size_t pos = i + 1;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      const std::string digits = s.substr(i, j - i);
      out.push_back({TokKind::number, pos, digits, Int(digits)});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({TokKind::ident, pos, s.substr(i, j - i), 0});
      i = j;
      continue;
    }
    TokKind k;
    switch (c) {
      case '+': k = TokKind::plus; break;
      case '-': k = TokKind::minus; break;
      case '*': k = TokKind::star; break;
      case '/': k = TokKind::slash; break;
      case '^': k = TokKind::caret; break;
      case '(': k = TokKind::lparen; break;
      case ')': k = TokKind::rparen; break;
      default:
        syntax_error(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({k, pos, std::string(1, c), 0});
    ++i;
  }
  out.push_back({TokKind::end, s.size() + 1, "", 0});
  return out;
}

struct Node {
  enum Kind { number, symbol, add, sub, mul, divide, neg, power } kind;
  size_t pos = 0;
  Int value;         // number
  std::string name;  // symbol
  long exponent = 0;  // power
  std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(Node::Kind k, size_t pos) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->pos = pos;
  return n;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr run() {
    NodePtr n = parse_expr();
    if (peek().kind != TokKind::end) syntax_error("unexpected trailing input", peek().pos);
    return n;
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  Token take() { return toks_[idx_++]; }

  static bool starts_atom(TokKind k) {
    return k == TokKind::number || k == TokKind::ident || k == TokKind::lparen;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (peek().kind == TokKind::plus || peek().kind == TokKind::minus) {
      const Token op = take();
      NodePtr n = make_node(op.kind == TokKind::plus ? Node::add : Node::sub, op.pos);
      n->a = std::move(lhs);
      n->b = parse_term();
      lhs = std::move(n);
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (peek().kind == TokKind::star || peek().kind == TokKind::slash) {
        const Token op = take();
        NodePtr n = make_node(op.kind == TokKind::star ? Node::mul : Node::divide, op.pos);
        n->a = std::move(lhs);
        n->b = parse_factor();
        lhs = std::move(n);
      } else if (starts_atom(peek().kind)) {
        // Juxtaposition: "10h^4", "(5) Q1 Q2".
        NodePtr n = make_node(Node::mul, peek().pos);
        n->a = std::move(lhs);
        n->b = parse_factor();
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_factor() {
    if (peek().kind == TokKind::minus) {
      const Token op = take();
      NodePtr n = make_node(Node::neg, op.pos);
      n->a = parse_factor();
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    while (peek().kind == TokKind::caret) {
      const Token op = take();
      if (peek().kind != TokKind::number)
        syntax_error("exponent must be a nonnegative integer literal", peek().pos);
      const Token e = take();
      if (e.value > 1000000)
        fail(ErrorCode::invalid_argument,
             "exponent " + e.value.str() + " is too large (position " +
                 std::to_string(e.pos) + ")");
      NodePtr n = make_node(Node::power, op.pos);
      n->a = std::move(base);
      n->exponent = e.value.convert_to<long>();
      base = std::move(n);
    }
    return base;
  }

  NodePtr parse_atom() {
    const Token t = peek();
    switch (t.kind) {
      case TokKind::number: {
        take();
        NodePtr n = make_node(Node::number, t.pos);
        n->value = t.value;
        return n;
      }
      case TokKind::ident: {
        take();
        NodePtr n = make_node(Node::symbol, t.pos);
        n->name = t.text;
        return n;
      }
      case TokKind::lparen: {
        take();
        NodePtr inner = parse_expr();
        if (peek().kind != TokKind::rparen) syntax_error("missing ')'", peek().pos);
        take();
        return inner;
      }
      default:
        syntax_error("expected a number, symbol or '('", t.pos);
    }
  }

  std::vector<Token> toks_;
  size_t idx_ = 0;
};

NodePtr parse_text(const std::string& text) { return Parser(lex(text)).run(); }

// Q-generator index when the name has the form Q<digits>, otherwise empty.
std::optional<int> q_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'Q') return std::nullopt;
  int k = 0;
  for (size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
    k = k * 10 + (name[i] - '0');
    if (k > 1000) return std::nullopt;
  }
  return k;
}

enum class Ctx { series, ext, gamma };

struct EvalEnv {
  Ctx ctx;
  HSeries::Params pr;
  ExtRingPtr ring;                          // ext context
  const GammaPresentation* pres = nullptr;  // gamma context
};

struct Value {
  HSeries s;
  ExtElement e;
  GammaElement g;
};

Value make_rational(const EvalEnv& env, const Rat& c) {
  Value v;
  switch (env.ctx) {
    case Ctx::series:
      v.s = HSeries::constant(env.pr, c);
      break;
    case Ctx::ext:
      v.e = ExtElement::scalar(env.ring, c);
      break;
    case Ctx::gamma:
      v.g = GammaElement(env.pr);
      if (c != 0) v.g.add_term(GammaWord{}, HSeries::constant(env.pr, c));
      break;
  }
  return v;
}

Value make_series(const EvalEnv& env, const HSeries& s) {
  Value v;
  switch (env.ctx) {
    case Ctx::series:
      v.s = s;
      break;
    case Ctx::ext:
      v.e = ExtElement::scalar(env.ring, s);
      break;
    case Ctx::gamma:
      v.g = GammaElement(env.pr);
      if (!s.is_zero()) v.g.add_term(GammaWord{}, s);
      break;
  }
  return v;
}

std::optional<Rat> as_rational(const EvalEnv& env, const Value& v) {
  switch (env.ctx) {
    case Ctx::series:
      if (v.s.degree() <= 0) return v.s.is_zero() ? Rat(0) : v.s.coeff(0);
      return std::nullopt;
    case Ctx::ext:
      if (v.e.is_zero()) return Rat(0);
      if (v.e.is_scalar() && v.e.coord(0).degree() <= 0) return v.e.coord(0).coeff(0);
      return std::nullopt;
    case Ctx::gamma: {
      if (v.g.is_zero()) return Rat(0);
      if (v.g.terms().size() != 1) return std::nullopt;
      const auto& [word, coeff] = *v.g.terms().begin();
      if (!word.gens.empty() || coeff.degree() > 0) return std::nullopt;
      return coeff.coeff(0);
    }
  }
  return std::nullopt;
}

Value eval(const EvalEnv& env, const Node* n);

Value eval_symbol(const EvalEnv& env, const Node* n) {
  const std::string& name = n->name;
  if (name == "h") return make_series(env, HSeries::h(env.pr));
  if (name == "delta")
    return make_series(env, HSeries(env.pr, {Rat(-26), Rat(1)}));
  if (name == "alpha" || name == "a") {
    if (env.ctx != Ctx::ext)
      syntax_error("symbol '" + name + "' needs the extension-ring context", n->pos);
    Value v;
    v.e = ExtElement::theta(env.ring);
    return v;
  }
  if (const std::optional<int> k = q_index(name)) {
    if (env.ctx != Ctx::gamma)
      syntax_error("operation symbols like '" + name +
                       "' are only available in the operation-word context",
                   n->pos);
    const Int p = env.pres->data().model().p();
    if (Int(*k) > p)
      syntax_error("generator index in '" + name + "' exceeds the model's prime " + p.str(),
                   n->pos);
    Value v;
    v.g = GammaElement(env.pr);
    v.g.add_term(GammaWord{{*k}}, HSeries::constant(env.pr, 1));
    return v;
  }
  syntax_error("unknown symbol '" + name + "'", n->pos);
}

Value eval_mul(const EvalEnv& env, Value a, Value b) {
  Value v;
  switch (env.ctx) {
    case Ctx::series:
      v.s = a.s * b.s;
      break;
    case Ctx::ext:
      v.e = a.e * b.e;
      break;
    case Ctx::gamma:
      v.g = env.pres->product(a.g, b.g);
      break;
  }
  return v;
}

Value eval(const EvalEnv& env, const Node* n) {
  switch (n->kind) {
    case Node::number:
      return make_rational(env, Rat(n->value));
    case Node::symbol:
      return eval_symbol(env, n);
    case Node::add: {
      Value a = eval(env, n->a.get()), b = eval(env, n->b.get());
      Value v;
      switch (env.ctx) {
        case Ctx::series: v.s = a.s + b.s; break;
        case Ctx::ext: v.e = a.e + b.e; break;
        case Ctx::gamma: v.g = a.g + b.g; break;
      }
      return v;
    }
    case Node::sub: {
      Value a = eval(env, n->a.get()), b = eval(env, n->b.get());
      Value v;
      switch (env.ctx) {
        case Ctx::series: v.s = a.s - b.s; break;
        case Ctx::ext: v.e = a.e - b.e; break;
        case Ctx::gamma: v.g = a.g - b.g; break;
      }
      return v;
    }
    case Node::mul:
      return eval_mul(env, eval(env, n->a.get()), eval(env, n->b.get()));
    case Node::divide: {
      Value a = eval(env, n->a.get()), b = eval(env, n->b.get());
      const std::optional<Rat> c = as_rational(env, b);
      if (!c)
        fail(ErrorCode::invalid_argument,
             "'/' accepts rational-constant divisors only (position " +
                 std::to_string(n->pos) + ")");
      if (*c == 0)
        fail(ErrorCode::invalid_argument,
             "division by zero (position " + std::to_string(n->pos) + ")");
      return eval_mul(env, std::move(a), make_rational(env, Rat(1) / *c));
    }
    case Node::neg:
      return eval_mul(env, make_rational(env, Rat(-1)), eval(env, n->a.get()));
    case Node::power: {
      Value base = eval(env, n->a.get());
      Value v;
      switch (env.ctx) {
        case Ctx::series:
          v.s = base.s.pow(n->exponent);
          break;
        case Ctx::ext:
          v.e = base.e.pow(n->exponent);
          break;
        case Ctx::gamma: {
          if (n->exponent > 64)
            fail(ErrorCode::invalid_argument,
                 "operation-word exponents above 64 are not supported");
          Value acc = make_rational(env, Rat(1));
          for (long i = 0; i < n->exponent; ++i) acc = eval_mul(env, std::move(acc), base);
          v = std::move(acc);
          break;
        }
      }
      return v;
    }
  }
  fail(ErrorCode::internal, "unhandled expression node");
}

bool contains_q(const Node* n) {
  if (!n) return false;
  if (n->kind == Node::symbol) return q_index(n->name).has_value();
  return contains_q(n->a.get()) || contains_q(n->b.get());
}

// Flattens a product tree into generator and scalar tokens. Q-free subtrees
// fold into one scalar coefficient each.
void collect_tokens(const EvalEnv& series_env, const PsiData& data, const Node* n,
                    TokenWord& out) {
  if (!contains_q(n)) {
    const Value v = eval(series_env, n);
    out.push_back(GammaToken::coefficient(v.s));
    return;
  }
  switch (n->kind) {
    case Node::symbol: {
      const std::optional<int> k = q_index(n->name);
      if (Int(*k) > data.model().p())
        syntax_error("generator index in '" + n->name + "' exceeds the model's prime " +
                         data.model().p().str(),
                     n->pos);
      out.push_back(GammaToken::generator(*k));
      return;
    }
    case Node::mul:
      collect_tokens(series_env, data, n->a.get(), out);
      collect_tokens(series_env, data, n->b.get(), out);
      return;
    case Node::neg:
      out.push_back(GammaToken::coefficient(HSeries::constant(series_env.pr, Rat(-1))));
      collect_tokens(series_env, data, n->a.get(), out);
      return;
    case Node::power: {
      TokenWord base;
      collect_tokens(series_env, data, n->a.get(), base);
      if (n->exponent > 64)
        fail(ErrorCode::invalid_argument,
             "operation-word exponents above 64 are not supported");
      for (long i = 0; i < n->exponent; ++i) out.insert(out.end(), base.begin(), base.end());
      return;
    }
    case Node::divide: {
      if (contains_q(n->b.get()))
        fail(ErrorCode::parse, "cannot divide by an operation word (position " +
                                   std::to_string(n->pos) + ")");
      collect_tokens(series_env, data, n->a.get(), out);
      const std::optional<Rat> c = as_rational(series_env, eval(series_env, n->b.get()));
      if (!c)
        fail(ErrorCode::invalid_argument,
             "'/' accepts rational-constant divisors only (position " +
                 std::to_string(n->pos) + ")");
      if (*c == 0)
        fail(ErrorCode::invalid_argument,
             "division by zero (position " + std::to_string(n->pos) + ")");
      out.push_back(GammaToken::coefficient(HSeries::constant(series_env.pr, Rat(1) / *c)));
      return;
    }
    default:
      fail(ErrorCode::parse,
           "the word form takes a single product of generators and scalars; "
           "sums belong to the element form (position " +
               std::to_string(n->pos) + ")");
  }
}

}  // namespace

HSeries parse_series(const std::string& text, const HSeries::Params& pr) {
  EvalEnv env{Ctx::series, pr, nullptr, nullptr};
  return eval(env, parse_text(text).get()).s;
}

ExtElement parse_ext(const std::string& text, const ExtRingPtr& ring) {
  EvalEnv env{Ctx::ext, ring->base(), ring, nullptr};
  return eval(env, parse_text(text).get()).e;
}

GammaElement parse_gamma(const std::string& text, const GammaPresentation& pres) {
  EvalEnv env{Ctx::gamma, pres.data().model().params(), nullptr, &pres};
  Value v = eval(env, parse_text(text).get());
  if (v.g.params().p == 0) return GammaElement(env.pr);
  return v.g;
}

TokenWord parse_token_word(const std::string& text, const PsiData& data) {
  EvalEnv env{Ctx::series, data.model().params(), nullptr, nullptr};
  NodePtr root = parse_text(text);
  TokenWord out;
  collect_tokens(env, data, root.get(), out);
  return out;
}

}  // namespace heckeops

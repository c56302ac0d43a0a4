#pragma once

#include <string>

#include "dyer_lashof.hpp"

namespace heckeops {

// Shared expression grammar for the command-line surface:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor | factor)*
//   factor := '-' factor | power
//   power  := atom ('^' natural)*
//   atom   := natural | symbol | '(' expr ')'
//
// Juxtaposition multiplies, so printed normal forms like "10h^4" or
// "(5) Q1 Q2" parse back to themselves. '/' accepts rational-constant
// divisors only. Symbols: h; delta, a shorthand for h - 26; alpha (with
// synonym a) in the extension context; Q0..Qp in the operation-word context.
// Syntax and symbol errors carry 1-based character positions.

HSeries parse_series(const std::string& text, const HSeries::Params& pr);
ExtElement parse_ext(const std::string& text, const ExtRingPtr& ring);
GammaElement parse_gamma(const std::string& text, const GammaPresentation& pres);

// The raw generator-and-scalar word form of an expression with no additions,
// used when a caller wants to rewrite an unnormalized word itself (products
// parsed by parse_gamma are already rewritten step by step).
TokenWord parse_token_word(const std::string& text, const PsiData& data);

}  // namespace heckeops

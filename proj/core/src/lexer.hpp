#ifndef DATAMIN_SRC_LEXER_HPP
#define DATAMIN_SRC_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "datamin/domain.hpp"

namespace datamin::dsl {

enum class Tok {
  Ident, IntLit,
  KwProgram, KwRequires, KwVar, KwIf, KwElse, KwWhile, KwReturn,
  KwInt, KwBool, KwTrue, KwFalse, KwAnd, KwOr, KwNot,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Colon, Comma, Semi, DotDot, Arrow,
  Assign, EqEq, NotEq, Lt, Le, Gt, Ge,
  Plus, Minus, Star, Slash, Percent,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;   // identifier or literal spelling
  Value int_value = 0;
  SourceLoc loc;
};

// Tokenises the whole input; skips whitespace and // line comments.
// Throws ParseError on unknown characters or malformed literals.
std::vector<Token> lex(std::string_view source);

const char* token_name(Tok kind);

}  // namespace datamin::dsl

#endif

#include "lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace datamin::dsl {

namespace {

const std::unordered_map<std::string_view, Tok> kKeywords = {
    {"program", Tok::KwProgram}, {"requires", Tok::KwRequires},
    {"var", Tok::KwVar},         {"if", Tok::KwIf},
    {"else", Tok::KwElse},       {"while", Tok::KwWhile},
    {"return", Tok::KwReturn},   {"int", Tok::KwInt},
    {"bool", Tok::KwBool},       {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},     {"and", Tok::KwAnd},
    {"or", Tok::KwOr},           {"not", Tok::KwNot},
};

}  // namespace

const char* token_name(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::KwProgram: return "'program'";
    case Tok::KwRequires: return "'requires'";
    case Tok::KwVar: return "'var'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwInt: return "'int'";
    case Tok::KwBool: return "'bool'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwNot: return "'not'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::DotDot: return "'..'";
    case Tok::Arrow: return "'->'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') { ++line; col = 1; } else { ++col; }
      ++i;
    }
  };
  auto peek = [&](std::size_t off = 0) -> char {
    return i + off < source.size() ? source[i + off] : '\0';
  };
  auto push = [&](Tok kind, std::string text, SourceLoc loc) {
    out.push_back(Token{kind, std::move(text), 0, loc});
  };

  while (i < source.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
    if (c == '/' && peek(1) == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[i])) || source[i] == '_'))
        advance(1);
      std::string word(source.substr(start, i - start));
      auto kw = kKeywords.find(word);
      push(kw != kKeywords.end() ? kw->second : Tok::Ident, std::move(word), loc);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < source.size() && std::isdigit(static_cast<unsigned char>(source[i])))
        advance(1);
      std::string digits(source.substr(start, i - start));
      Token t{Tok::IntLit, digits, 0, loc};
      try {
        t.int_value = std::stoll(digits);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range: " + digits, loc);
      }
      out.push_back(std::move(t));
      continue;
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    if (two('=', '=')) { push(Tok::EqEq, "==", loc); advance(2); continue; }
    if (two('!', '=')) { push(Tok::NotEq, "!=", loc); advance(2); continue; }
    if (two('<', '=')) { push(Tok::Le, "<=", loc); advance(2); continue; }
    if (two('>', '=')) { push(Tok::Ge, ">=", loc); advance(2); continue; }
    if (two('-', '>')) { push(Tok::Arrow, "->", loc); advance(2); continue; }
    if (two('.', '.')) { push(Tok::DotDot, "..", loc); advance(2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, "(", loc); break;
      case ')': push(Tok::RParen, ")", loc); break;
      case '{': push(Tok::LBrace, "{", loc); break;
      case '}': push(Tok::RBrace, "}", loc); break;
      case '[': push(Tok::LBracket, "[", loc); break;
      case ']': push(Tok::RBracket, "]", loc); break;
      case ':': push(Tok::Colon, ":", loc); break;
      case ',': push(Tok::Comma, ",", loc); break;
      case ';': push(Tok::Semi, ";", loc); break;
      case '=': push(Tok::Assign, "=", loc); break;
      case '<': push(Tok::Lt, "<", loc); break;
      case '>': push(Tok::Gt, ">", loc); break;
      case '+': push(Tok::Plus, "+", loc); break;
      case '-': push(Tok::Minus, "-", loc); break;
      case '*': push(Tok::Star, "*", loc); break;
      case '/': push(Tok::Slash, "/", loc); break;
      case '%': push(Tok::Percent, "%", loc); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", loc);
    }
    advance(1);
  }
  out.push_back(Token{Tok::End, "", 0, SourceLoc{line, col}});
  return out;
}

}  // namespace datamin::dsl

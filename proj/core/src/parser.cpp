#include "datamin/parser.hpp"

#include <map>
#include <set>

#include "lexer.hpp"

namespace datamin::dsl {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view source) : toks_(lex(source)) {}

  Program parse_program() {
    expect(Tok::KwProgram);
    Program p;
    p.name = expect(Tok::Ident).text;
    expect(Tok::LParen);
    p.inputs.push_back(parse_param());
    while (accept(Tok::Comma)) p.inputs.push_back(parse_param());
    expect(Tok::RParen);
    expect(Tok::Arrow);
    if (accept(Tok::KwInt)) p.output_type = Type::Int;
    else if (accept(Tok::KwBool)) p.output_type = Type::Bool;
    else fail("expected 'int' or 'bool' as the output type");
    if (accept(Tok::KwRequires)) {
      p.precondition = parse_expr();
      expect(Tok::Semi);
    } else {
      p.precondition = make_bool(true);
    }
    p.body = parse_block();
    expect(Tok::End);
    return p;
  }

  ExprPtr parse_bare_expr() {
    ExprPtr e = parse_expr();
    expect(Tok::End);
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at(Tok kind) const { return cur().kind == kind; }
  bool accept(Tok kind) {
    if (!at(kind)) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok kind) {
    if (!at(kind))
      fail(std::string("expected ") + token_name(kind) + ", found " +
           token_name(cur().kind));
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().loc);
  }

  Param parse_param() {
    Param param;
    param.name = expect(Tok::Ident).text;
    expect(Tok::Colon);
    if (accept(Tok::KwBool)) {
      param.domain = Domain::boolean();
      return param;
    }
    SourceLoc kw = cur().loc;
    expect(Tok::KwInt);
    if (!at(Tok::LBracket))
      throw ParseError("input '" + param.name +
                           "' needs a bounded domain: int[lo..hi]",
                       kw);
    expect(Tok::LBracket);
    Value lo = parse_bound();
    expect(Tok::DotDot);
    Value hi = parse_bound();
    SourceLoc close = cur().loc;
    expect(Tok::RBracket);
    if (lo > hi)
      throw ParseError("empty domain: " + std::to_string(lo) + " > " +
                           std::to_string(hi),
                       close);
    param.domain = Domain::bounded_int(lo, hi);
    return param;
  }

  Value parse_bound() {
    bool negate = accept(Tok::Minus);
    const Token& t = expect(Tok::IntLit);
    return negate ? -t.int_value : t.int_value;
  }

  Block parse_block() {
    expect(Tok::LBrace);
    Block b;
    while (!at(Tok::RBrace)) b.stmts.push_back(parse_stmt());
    expect(Tok::RBrace);
    return b;
  }

  StmtPtr parse_stmt() {
    SourceLoc loc = cur().loc;
    if (accept(Tok::KwVar)) {
      std::string name = expect(Tok::Ident).text;
      expect(Tok::Assign);
      ExprPtr init = parse_expr();
      expect(Tok::Semi);
      return std::make_shared<Stmt>(Stmt{Stmt::VarDecl{name, init}, loc});
    }
    if (accept(Tok::KwIf)) {
      expect(Tok::LParen);
      ExprPtr cond = parse_expr();
      expect(Tok::RParen);
      Block then_block = parse_block();
      std::optional<Block> else_block;
      if (accept(Tok::KwElse)) else_block = parse_block();
      return std::make_shared<Stmt>(
          Stmt{Stmt::If{cond, std::move(then_block), std::move(else_block)}, loc});
    }
    if (accept(Tok::KwWhile)) {
      expect(Tok::LParen);
      ExprPtr cond = parse_expr();
      expect(Tok::RParen);
      Block body = parse_block();
      return std::make_shared<Stmt>(Stmt{Stmt::While{cond, std::move(body)}, loc});
    }
    if (accept(Tok::KwReturn)) {
      ExprPtr value = parse_expr();
      expect(Tok::Semi);
      return std::make_shared<Stmt>(Stmt{Stmt::Return{value}, loc});
    }
    if (at(Tok::Ident)) {
      std::string name = next().text;
      expect(Tok::Assign);
      ExprPtr value = parse_expr();
      expect(Tok::Semi);
      return std::make_shared<Stmt>(Stmt{Stmt::Assign{name, value}, loc});
    }
    fail("expected a statement");
  }

  // Precedence climbing, lowest first: or, and, ==/!=, </<=/>/>=, +/-,
  // *//
  // /%, unary, primary.
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at(Tok::KwOr)) {
      SourceLoc loc = next().loc;
      lhs = make_binary(BinOp::Or, lhs, parse_and(), loc);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_equality();
    while (at(Tok::KwAnd)) {
      SourceLoc loc = next().loc;
      lhs = make_binary(BinOp::And, lhs, parse_equality(), loc);
    }
    return lhs;
  }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_relational();
    while (at(Tok::EqEq) || at(Tok::NotEq)) {
      BinOp op = at(Tok::EqEq) ? BinOp::Eq : BinOp::Ne;
      SourceLoc loc = next().loc;
      lhs = make_binary(op, lhs, parse_relational(), loc);
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    ExprPtr lhs = parse_additive();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      BinOp op = at(Tok::Lt)   ? BinOp::Lt
                 : at(Tok::Le) ? BinOp::Le
                 : at(Tok::Gt) ? BinOp::Gt
                               : BinOp::Ge;
      SourceLoc loc = next().loc;
      lhs = make_binary(op, lhs, parse_additive(), loc);
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      SourceLoc loc = next().loc;
      lhs = make_binary(op, lhs, parse_multiplicative(), loc);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      BinOp op = at(Tok::Star)    ? BinOp::Mul
                 : at(Tok::Slash) ? BinOp::Div
                                  : BinOp::Mod;
      SourceLoc loc = next().loc;
      lhs = make_binary(op, lhs, parse_unary(), loc);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus)) {
      SourceLoc loc = next().loc;
      return make_unary(UnOp::Neg, parse_unary(), loc);
    }
    if (at(Tok::KwNot)) {
      SourceLoc loc = next().loc;
      return make_unary(UnOp::Not, parse_unary(), loc);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    SourceLoc loc = cur().loc;
    if (at(Tok::IntLit)) {
      ExprPtr e = make_int(next().int_value);
      const_cast<Expr&>(*e).loc = loc;
      return e;
    }
    if (accept(Tok::KwTrue)) return make_bool(true);
    if (accept(Tok::KwFalse)) return make_bool(false);
    if (at(Tok::Ident)) return make_var(next().text, loc);
    if (accept(Tok::LParen)) {
      ExprPtr e = parse_expr();
      expect(Tok::RParen);
      return e;
    }
    fail("expected an expression");
  }
};

// -- Semantic validation ----------------------------------------------------

class Checker {
 public:
  explicit Checker(const Program& p) : program_(p) {
    for (const auto& in : p.inputs) {
      if (types_.count(in.name))
        throw ParseError("duplicate input '" + in.name + "'", {});
      types_[in.name] = in.domain.kind;
      assigned_.insert(in.name);
    }
  }

  void run() {
    check_precondition();
    std::set<std::string> assigned = assigned_;
    bool returns = check_block(program_.body, assigned, /*in_loop=*/false);
    if (!returns)
      throw ParseError(
          "not every path through '" + program_.name + "' returns a value", {});
  }

 private:
  const Program& program_;
  std::map<std::string, Type> types_;
  std::set<std::string> assigned_;

  void check_precondition() {
    for (const auto& in : program_.inputs) (void)in;
    std::vector<std::string> used;
    collect_vars(*program_.precondition, used);
    for (const auto& name : used) {
      if (program_.find_input(name) == nullptr)
        throw ParseError(
            "precondition may only reference inputs; '" + name + "' is not one",
            program_.precondition->loc);
    }
    std::set<std::string> all = assigned_;
    if (type_of(*program_.precondition, all) != Type::Bool)
      throw ParseError("precondition must be boolean",
                       program_.precondition->loc);
  }

  // Returns whether the block returns on every path. Enforces: no code
  // after a statement that always returns, no return inside loops, types,
  // and definite assignment before use.
  bool check_block(const Block& b, std::set<std::string>& assigned, bool in_loop) {
    bool returned = false;
    for (const auto& stmt : b.stmts) {
      if (returned)
        throw ParseError("unreachable statement after return", stmt->loc);
      returned = check_stmt(*stmt, assigned, in_loop);
    }
    return returned;
  }

  bool check_stmt(const Stmt& s, std::set<std::string>& assigned, bool in_loop) {
    if (auto* d = std::get_if<Stmt::VarDecl>(&s.node)) {
      Type t = type_of(*d->init, assigned);
      if (types_.count(d->name))
        throw ParseError("redeclaration of '" + d->name + "'", s.loc);
      types_[d->name] = t;
      assigned.insert(d->name);
      return false;
    }
    if (auto* a = std::get_if<Stmt::Assign>(&s.node)) {
      Type t = type_of(*a->value, assigned);
      auto it = types_.find(a->name);
      if (it == types_.end())
        throw ParseError("assignment to undeclared variable '" + a->name + "'",
                         s.loc);
      if (it->second != t)
        throw ParseError("type mismatch: '" + a->name + "' is " +
                             type_name(it->second) + ", assigned " + type_name(t),
                         s.loc);
      assigned.insert(a->name);
      return false;
    }
    if (auto* i = std::get_if<Stmt::If>(&s.node)) {
      require_bool(*i->cond, assigned, "if condition");
      std::set<std::string> then_assigned = assigned;
      bool then_returns = check_block(i->then_block, then_assigned, in_loop);
      std::set<std::string> else_assigned = assigned;
      bool else_returns = false;
      if (i->else_block)
        else_returns = check_block(*i->else_block, else_assigned, in_loop);
      if (then_returns && else_returns) return true;
      if (then_returns) assigned = std::move(else_assigned);
      else if (else_returns) assigned = std::move(then_assigned);
      else {
        std::set<std::string> both;
        for (const auto& n : then_assigned)
          if (else_assigned.count(n)) both.insert(n);
        assigned = std::move(both);
      }
      return false;
    }
    if (auto* w = std::get_if<Stmt::While>(&s.node)) {
      require_bool(*w->cond, assigned, "while condition");
      // The body may run zero times: its assignments do not count after.
      std::set<std::string> body_assigned = assigned;
      check_block(w->body, body_assigned, /*in_loop=*/true);
      return false;
    }
    const auto& r = std::get<Stmt::Return>(s.node);
    if (in_loop) throw ParseError("return inside a loop body", s.loc);
    Type t = type_of(*r.value, assigned);
    if (t != program_.output_type)
      throw ParseError(std::string("return type mismatch: program yields ") +
                           type_name(program_.output_type) + ", returned " +
                           type_name(t),
                       s.loc);
    return true;
  }

  void require_bool(const Expr& e, const std::set<std::string>& assigned,
                    const char* what) {
    if (type_of(e, assigned) != Type::Bool)
      throw ParseError(std::string(what) + " must be boolean", e.loc);
  }

  Type type_of(const Expr& e, const std::set<std::string>& assigned) {
    if (std::holds_alternative<Expr::IntLit>(e.node)) return Type::Int;
    if (std::holds_alternative<Expr::BoolLit>(e.node)) return Type::Bool;
    if (auto* v = std::get_if<Expr::Var>(&e.node)) {
      auto it = types_.find(v->name);
      if (it == types_.end())
        throw ParseError("undeclared variable '" + v->name + "'", e.loc);
      if (!assigned.count(v->name))
        throw ParseError("'" + v->name + "' may be used before assignment",
                         e.loc);
      return it->second;
    }
    if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
      Type t = type_of(*u->operand, assigned);
      if (u->op == UnOp::Neg && t != Type::Int)
        throw ParseError("unary '-' needs an integer operand", e.loc);
      if (u->op == UnOp::Not && t != Type::Bool)
        throw ParseError("'not' needs a boolean operand", e.loc);
      return t;
    }
    const auto& bin = std::get<Expr::Binary>(e.node);
    Type lt = type_of(*bin.lhs, assigned);
    Type rt = type_of(*bin.rhs, assigned);
    if (is_arithmetic(bin.op)) {
      if (lt != Type::Int || rt != Type::Int)
        throw ParseError(std::string("'") + binop_token(bin.op) +
                             "' needs integer operands",
                         e.loc);
      if (bin.op == BinOp::Div || bin.op == BinOp::Mod) {
        if (auto* z = std::get_if<Expr::IntLit>(&bin.rhs->node); z && z->value == 0)
          throw ParseError("division by a constant zero", e.loc);
      }
      return Type::Int;
    }
    if (is_logical(bin.op)) {
      if (lt != Type::Bool || rt != Type::Bool)
        throw ParseError(std::string("'") + binop_token(bin.op) +
                             "' needs boolean operands",
                         e.loc);
      return Type::Bool;
    }
    if (bin.op == BinOp::Eq || bin.op == BinOp::Ne) {
      if (lt != rt)
        throw ParseError("'==' / '!=' need operands of the same type", e.loc);
      return Type::Bool;
    }
    if (lt != Type::Int || rt != Type::Int)
      throw ParseError(std::string("'") + binop_token(bin.op) +
                           "' needs integer operands",
                       e.loc);
    return Type::Bool;
  }
};

}  // namespace

Program parse(std::string_view source) {
  Parser parser(source);
  Program p = parser.parse_program();
  Checker(p).run();
  return p;
}

ExprPtr parse_expression(std::string_view source, const Program& context,
                         Type want) {
  Parser parser(source);
  ExprPtr e = parser.parse_bare_expr();
  // Check through a shell program returning the expression: variables must
  // be inputs of the context and the type must match `want`.
  Program shell;
  shell.name = "expr";
  shell.inputs = context.inputs;
  shell.precondition = make_bool(true);
  shell.output_type = want;
  shell.body.stmts.push_back(std::make_shared<Stmt>(Stmt{Stmt::Return{e}, e->loc}));
  Checker(shell).run();
  return e;
}

}  // namespace datamin::dsl

#ifndef DATAMIN_AST_HPP
#define DATAMIN_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "datamin/domain.hpp"

namespace datamin::dsl {

enum class UnOp { Neg, Not };
enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or,
};

bool is_arithmetic(BinOp op);
bool is_comparison(BinOp op);
bool is_logical(BinOp op);
const char* binop_token(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expressions are immutable and freely shared; symbolic stores alias
// subtrees heavily, so nodes must never be mutated after construction.
struct Expr {
  struct IntLit { Value value; };
  struct BoolLit { bool value; };
  struct Var { std::string name; };
  struct Unary { UnOp op; ExprPtr operand; };
  struct Binary { BinOp op; ExprPtr lhs, rhs; };

  std::variant<IntLit, BoolLit, Var, Unary, Binary> node;
  SourceLoc loc;
};

ExprPtr make_int(Value v);
ExprPtr make_bool(bool v);
ExprPtr make_var(std::string name, SourceLoc loc = {});
ExprPtr make_unary(UnOp op, ExprPtr operand, SourceLoc loc = {});
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});

bool expr_equal(const Expr& a, const Expr& b);

// Replaces every occurrence of `name` by `replacement`, sharing untouched
// subtrees. Constant-folds nodes whose operands become literals.
ExprPtr substitute(const ExprPtr& e, const std::string& name,
                   const ExprPtr& replacement);
ExprPtr fold_constants(const ExprPtr& e);

void collect_vars(const Expr& e, std::vector<std::string>& out);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Block {
  std::vector<StmtPtr> stmts;
};

struct Stmt {
  struct VarDecl { std::string name; ExprPtr init; };
  struct Assign { std::string name; ExprPtr value; };
  struct If { ExprPtr cond; Block then_block; std::optional<Block> else_block; };
  struct While { ExprPtr cond; Block body; };
  struct Return { ExprPtr value; };

  std::variant<VarDecl, Assign, If, While, Return> node;
  SourceLoc loc;
};

struct Param {
  std::string name;
  Domain domain;
};

// A validated program: distinct input names, well-typed body, every path
// returns exactly once, no return inside loops, precondition over inputs
// only. Immutable after construction; safe to share across threads.
struct Program {
  std::string name;
  std::vector<Param> inputs;
  ExprPtr precondition;  // boolean expr over input names; never null (true by default)
  Block body;
  Type output_type = Type::Int;

  const Param* find_input(const std::string& name) const;
  int input_index(const std::string& name) const;  // -1 if absent
  bool same_signature(const Program& other) const;
};

bool program_equal(const Program& a, const Program& b);

}  // namespace datamin::dsl

#endif

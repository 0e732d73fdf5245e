#include "datamin/emit.hpp"

#include <json.hpp>

#include "datamin/parser.hpp"
#include "datamin/printer.hpp"
#include "datamin/sha256.hpp"
#include "datamin/solver.hpp"

namespace datamin::emit {

using ordered_json = nlohmann::ordered_json;

std::string program_digest(const dsl::Program& p) {
  return "sha256:" + sha256_hex(dsl::print_program(p));
}

namespace {

ordered_json value_json(Value v, Type t) {
  if (t == Type::Bool) return v != 0;
  return v;
}

Value value_from_json(const ordered_json& j, Type t, const std::string& what) {
  if (t == Type::Bool) {
    if (!j.is_boolean()) throw Error(what + ": expected a boolean");
    return j.get<bool>() ? 1 : 0;
  }
  if (!j.is_number_integer()) throw Error(what + ": expected an integer");
  return j.get<Value>();
}

ordered_json domain_json(const Domain& d) {
  ordered_json j;
  if (d.kind == Type::Bool) {
    j["kind"] = "bool";
  } else {
    j["kind"] = "int";
    j["lo"] = d.lo;
    j["hi"] = d.hi;
  }
  return j;
}

std::string guard_string(const logic::IntervalSet& set, const std::string& var,
                         const Domain& dom) {
  return dsl::print_expr(*logic::interval_set_expr(set, var, dom));
}

// The collectable values of one coordinate: the union of its guards.
logic::IntervalSet table_scope(const std::vector<synth::LocalRow>& rows) {
  std::vector<logic::IntervalSet::Interval> parts;
  for (const auto& row : rows)
    parts.insert(parts.end(), row.guard.parts().begin(), row.guard.parts().end());
  return logic::IntervalSet::of(std::move(parts));
}

}  // namespace

std::string to_json(const synth::Minimiser& m, const dsl::Program& p) {
  ordered_json doc;
  doc["schema"] = kDocumentSchema;
  doc["tool_version"] = kToolVersion;
  doc["program"] = p.name;
  doc["digest"] = program_digest(p);
  doc["mode"] = synth::mode_name(m.mode);

  ordered_json inputs = ordered_json::array();
  for (const auto& [name, dom] : m.space.vars()) {
    ordered_json in;
    in["name"] = name;
    in["domain"] = domain_json(dom);
    inputs.push_back(std::move(in));
  }
  doc["inputs"] = std::move(inputs);
  doc["precondition"] = logic::formula_to_string(*m.precondition);

  ordered_json tables = ordered_json::array();
  ordered_json class_counts;
  ordered_json domain_sizes;
  if (m.mode == synth::Mode::Distributed) {
    for (std::size_t a = 0; a < m.space.arity(); ++a) {
      const auto& [name, dom] = m.space.vars()[a];
      ordered_json table;
      table["input"] = name;
      ordered_json rows = ordered_json::array();
      for (const auto& row : m.tables[a]) {
        ordered_json r;
        r["guard"] = guard_string(row.guard, name, dom);
        r["representative"] = value_json(row.representative, dom.kind);
        rows.push_back(std::move(r));
      }
      table["rows"] = std::move(rows);
      tables.push_back(std::move(table));
      class_counts[name] = m.tables[a].size();
      domain_sizes[name] = dom.cardinality();
    }
  } else {
    ordered_json table;
    table["input"] = "*";
    ordered_json rows = ordered_json::array();
    for (const auto& row : m.joint_table) {
      ordered_json r;
      r["guard"] = dsl::print_expr(*logic::formula_to_expr(*row.guard));
      ordered_json rep;
      for (std::size_t i = 0; i < m.space.arity(); ++i) {
        const auto& [name, dom] = m.space.vars()[i];
        rep[name] = value_json(row.representative[i], dom.kind);
      }
      r["representative"] = std::move(rep);
      rows.push_back(std::move(r));
    }
    table["rows"] = std::move(rows);
    tables.push_back(std::move(table));
    class_counts["*"] = m.joint_table.size();
    for (const auto& [name, dom] : m.space.vars())
      domain_sizes[name] = dom.cardinality();
  }
  doc["tables"] = std::move(tables);

  ordered_json meta;
  meta["class_counts"] = std::move(class_counts);
  meta["domain_sizes"] = std::move(domain_sizes);
  meta["product_size"] = m.space.size();
  doc["metadata"] = std::move(meta);
  return doc.dump(2) + "\n";
}

synth::Minimiser from_json(const std::string& text, const dsl::Program& p,
                           bool check_digest) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("minimiser document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != kDocumentSchema)
    throw Error("not a minimiser document (missing or wrong schema field)");
  if (doc.value("program", "") != p.name)
    throw Error("document is for program '" + doc.value("program", "") +
                "', not '" + p.name + "'");
  if (check_digest && doc.value("digest", "") != program_digest(p))
    throw Error("digest mismatch: the program source differs from the one "
                "this minimiser was synthesized from");

  synth::Minimiser m;
  m.program_name = p.name;
  m.space = InputSpace::of_program(p);
  m.precondition = logic::f_atom(dsl::fold_constants(p.precondition));

  std::string mode = doc.value("mode", "");
  if (mode == "distributed") m.mode = synth::Mode::Distributed;
  else if (mode == "monolithic") m.mode = synth::Mode::Monolithic;
  else throw Error("unknown minimiser mode '" + mode + "'");

  const auto& tables = doc.at("tables");
  if (m.mode == synth::Mode::Distributed) {
    m.tables.resize(m.space.arity());
    for (const auto& table : tables) {
      std::string input = table.at("input").get<std::string>();
      int idx = m.space.index_of(input);
      if (idx < 0) throw Error("table for unknown input '" + input + "'");
      const Domain& dom = m.space.domain(static_cast<std::size_t>(idx));
      auto& rows = m.tables[static_cast<std::size_t>(idx)];
      for (const auto& r : table.at("rows")) {
        dsl::ExprPtr guard_expr = dsl::parse_expression(
            r.at("guard").get<std::string>(), p, Type::Bool);
        logic::IntervalSet guard = logic::project_to_intervals(
            logic::f_atom(guard_expr), input, dom);
        Value rep = value_from_json(r.at("representative"), dom.kind,
                                    "representative of '" + input + "'");
        if (!guard.contains(rep))
          throw Error("representative of a row of '" + input +
                      "' does not satisfy its guard");
        rows.push_back(synth::LocalRow{std::move(guard), rep});
      }
      std::sort(rows.begin(), rows.end(),
                [](const synth::LocalRow& x, const synth::LocalRow& y) {
                  return x.representative < y.representative;
                });
    }
  } else {
    logic::Env env(m.space.vars().begin(), m.space.vars().end());
    for (const auto& table : tables) {
      for (const auto& r : table.at("rows")) {
        dsl::ExprPtr guard_expr = dsl::parse_expression(
            r.at("guard").get<std::string>(), p, Type::Bool);
        // Re-canonicalise so structural guard comparisons stay meaningful.
        logic::FormulaPtr guard =
            logic::quantifier_eliminate(logic::f_atom(guard_expr), env);
        const auto& rep_obj = r.at("representative");
        Point rep(m.space.arity());
        for (std::size_t i = 0; i < m.space.arity(); ++i) {
          const auto& [name, dom] = m.space.vars()[i];
          rep[i] = value_from_json(rep_obj.at(name), dom.kind,
                                   "representative value of '" + name + "'");
        }
        if (!logic::eval_formula(guard, env, rep))
          throw Error("monolithic representative does not satisfy its guard");
        m.joint_table.push_back(synth::JointRow{std::move(guard), std::move(rep)});
      }
    }
    std::sort(m.joint_table.begin(), m.joint_table.end(),
              [](const synth::JointRow& x, const synth::JointRow& y) {
                return x.representative < y.representative;
              });
  }
  return m;
}

namespace {

std::string pick_result_name(const InputSpace& space) {
  std::string name = "repr";
  bool taken = true;
  while (taken) {
    taken = false;
    for (const auto& [n, d] : space.vars()) taken |= (n == name);
    if (taken) name += "_";
  }
  return name;
}

dsl::ExprPtr precondition_expr(const logic::FormulaPtr& pre) {
  return logic::formula_to_expr(*pre);
}

struct SourceRow {
  dsl::ExprPtr guard;
  dsl::ExprPtr result;
};

dsl::StmtPtr assign_stmt(const std::string& name, dsl::ExprPtr value) {
  return std::make_shared<dsl::Stmt>(
      dsl::Stmt{dsl::Stmt::Assign{name, std::move(value)}, {}});
}

// Guarded branches nested in else blocks, ordered by representative; the
// last class becomes the unconditional else when the guards cover the
// whole domain. Without total coverage the fallthrough keeps the identity
// assignment, unreachable under the emitted requires clause.
dsl::Block branch_chain(const std::vector<SourceRow>& rows, std::size_t i,
                        bool total, const std::string& result_name) {
  dsl::Block block;
  if (i == rows.size()) return block;
  if (total && i + 1 == rows.size()) {
    block.stmts.push_back(assign_stmt(result_name, rows[i].result));
    return block;
  }
  dsl::Block then_block;
  then_block.stmts.push_back(assign_stmt(result_name, rows[i].result));
  dsl::Block else_block = branch_chain(rows, i + 1, total, result_name);
  std::optional<dsl::Block> else_opt;
  if (!else_block.stmts.empty()) else_opt = std::move(else_block);
  block.stmts.push_back(std::make_shared<dsl::Stmt>(dsl::Stmt{
      dsl::Stmt::If{rows[i].guard, std::move(then_block), std::move(else_opt)},
      {}}));
  return block;
}

std::string render(const std::string& program_name, const std::string& input_name,
                   const std::vector<std::pair<std::string, Domain>>& params,
                   Type result_type, const dsl::ExprPtr& requires_expr,
                   const std::vector<SourceRow>& rows, bool total,
                   const std::string& result_name) {
  dsl::Program tp;
  tp.name = program_name + "_min_" + input_name;
  for (const auto& [name, dom] : params) tp.inputs.push_back({name, dom});
  tp.precondition = requires_expr ? requires_expr : dsl::make_bool(true);
  tp.output_type = result_type;
  tp.body.stmts.push_back(std::make_shared<dsl::Stmt>(
      dsl::Stmt{dsl::Stmt::VarDecl{result_name, dsl::make_var(input_name)}, {}}));
  dsl::Block chain = branch_chain(rows, 0, total, result_name);
  for (auto& s : chain.stmts) tp.body.stmts.push_back(std::move(s));
  tp.body.stmts.push_back(std::make_shared<dsl::Stmt>(
      dsl::Stmt{dsl::Stmt::Return{dsl::make_var(result_name)}, {}}));
  return dsl::print_program(tp);
}

}  // namespace

std::vector<EmittedProgram> to_source(const synth::Minimiser& m,
                                      const dsl::Program& p) {
  std::vector<EmittedProgram> out;
  std::string result_name = pick_result_name(m.space);

  for (std::size_t a = 0; a < m.space.arity(); ++a) {
    const auto& [input, dom] = m.space.vars()[a];
    std::vector<SourceRow> rows;
    std::vector<std::pair<std::string, Domain>> params;
    dsl::ExprPtr requires_expr;
    bool total = false;

    if (m.mode == synth::Mode::Distributed) {
      params = {{input, dom}};
      logic::IntervalSet scope = table_scope(m.tables[a]);
      total = scope.covers(dom);
      requires_expr = total ? nullptr : logic::interval_set_expr(scope, input, dom);
      for (const auto& row : m.tables[a]) {
        rows.push_back(SourceRow{
            logic::interval_set_expr(row.guard, input, dom),
            dom.kind == Type::Bool ? dsl::make_bool(row.representative != 0)
                                   : dsl::make_int(row.representative)});
      }
    } else {
      params.assign(m.space.vars().begin(), m.space.vars().end());
      dsl::ExprPtr pre = precondition_expr(m.precondition);
      bool trivial = false;
      if (auto* b = std::get_if<dsl::Expr::BoolLit>(&pre->node)) trivial = b->value;
      total = trivial;
      requires_expr = trivial ? nullptr : pre;
      for (const auto& row : m.joint_table) {
        rows.push_back(SourceRow{
            logic::formula_to_expr(*row.guard),
            dom.kind == Type::Bool
                ? dsl::make_bool(row.representative[a] != 0)
                : dsl::make_int(row.representative[a])});
      }
    }

    out.push_back(EmittedProgram{
        input, render(m.program_name, input, params, dom.kind, requires_expr,
                      rows, total, result_name)});
  }
  return out;
}

}  // namespace datamin::emit

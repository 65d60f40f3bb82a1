#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rulegate {

enum class term_kind { variable, symbol, number };

struct term {
  term_kind kind = term_kind::symbol;
  std::string name;       // variable / symbol
  std::int64_t num = 0;   // number

  static term var(std::string n) { return {term_kind::variable, std::move(n), 0}; }
  static term sym(std::string n) { return {term_kind::symbol, std::move(n), 0}; }
  static term integer(std::int64_t v) { return {term_kind::number, "", v}; }

  bool is_var() const { return kind == term_kind::variable; }
  bool operator==(const term& o) const {
    if (kind != o.kind) return false;
    return kind == term_kind::number ? num == o.num : name == o.name;
  }
  bool operator<(const term& o) const {
    if (kind != o.kind) return kind < o.kind;
    return kind == term_kind::number ? num < o.num : name < o.name;
  }
};

struct atom {
  std::string pred;
  std::vector<term> args;

  bool ground() const {
    for (const auto& t : args)
      if (t.is_var()) return false;
    return true;
  }
  bool operator==(const atom& o) const {
    return pred == o.pred && args == o.args;
  }
  bool operator<(const atom& o) const {
    if (pred != o.pred) return pred < o.pred;
    if (args.size() != o.args.size()) return args.size() < o.args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == o.args[i]) continue;
      return args[i] < o.args[i];
    }
    return false;
  }
};

enum class cmp_op { eq, neq, le, gt, lt, ge };

struct comparison {
  term lhs;
  cmp_op op = cmp_op::eq;
  term rhs;
  bool operator==(const comparison& o) const {
    return lhs == o.lhs && op == o.op && rhs == o.rhs;
  }
};

enum class elem_kind { positive, negative, compare };

// One body item; order within the rule is preserved for printing.
struct body_elem {
  elem_kind kind = elem_kind::positive;
  atom a;          // positive / negative
  comparison cmp;  // compare

  static body_elem pos(atom x) { return {elem_kind::positive, std::move(x), {}}; }
  static body_elem neg(atom x) { return {elem_kind::negative, std::move(x), {}}; }
  static body_elem compare(comparison c) { return {elem_kind::compare, {}, std::move(c)}; }

  bool operator==(const body_elem& o) const {
    if (kind != o.kind) return false;
    return kind == elem_kind::compare ? cmp == o.cmp : a == o.a;
  }
};

struct asp_rule {
  atom head;
  std::vector<body_elem> body;

  std::vector<const atom*> pos_atoms() const {
    std::vector<const atom*> out;
    for (const auto& e : body)
      if (e.kind == elem_kind::positive) out.push_back(&e.a);
    return out;
  }
  std::vector<const atom*> neg_atoms() const {
    std::vector<const atom*> out;
    for (const auto& e : body)
      if (e.kind == elem_kind::negative) out.push_back(&e.a);
    return out;
  }
  bool operator==(const asp_rule& o) const {
    return head == o.head && body == o.body;
  }
};

struct asp_program {
  std::vector<asp_rule> rules;
  int scale_exponent = 1;  // facts/thresholds carry *10^d fixed-point ints
  bool operator==(const asp_program& o) const {
    return rules == o.rules && scale_exponent == o.scale_exponent;
  }
};

struct fact_set {
  std::vector<atom> facts;  // ground
};

// ---- text form ------------------------------------------------------------

std::string print_term(const term& t);
std::string print_atom(const atom& a);
std::string print_comparison(const comparison& c);
std::string print_rule(const asp_rule& r);
std::string print_program(const asp_program& p);
std::string print_facts(const fact_set& f);

const char* cmp_op_token(cmp_op op);

// Inverse of print_program; checks rule safety and stratification.
asp_program parse_program(std::string_view text);
fact_set parse_facts(std::string_view text);

// ---- evaluation -----------------------------------------------------------

struct model {
  std::set<atom> atoms;  // facts plus everything derived
  bool contains(const atom& a) const { return atoms.count(a) != 0; }
};

// Stratum per predicate; throws stratification_error on a cycle through
// negation. Predicates without rules sit in stratum 0.
std::vector<std::pair<std::string, int>> stratify(const asp_program& p);

// Unique answer set of a stratified program, by stratum-wise forward
// chaining to fixpoint.
model evaluate(const asp_program& p, const fact_set& f);

// True when some grounding of `r` consistent with `bound` (variable name ->
// ground term) is satisfied in `m`.
bool rule_fires(const asp_rule& r, const model& m,
                const std::vector<std::pair<std::string, term>>& bound);

// ---- proof trees ----------------------------------------------------------

struct proof_tree;

struct proof_cond {
  enum class kind { atom_check, compare, negation };
  kind k = kind::atom_check;
  std::string attr;           // predicate the condition constrains
  bool has_observed = false;
  term observed;              // fact value seen for that predicate
  cmp_op op = cmp_op::eq;     // required relation (atom_check => eq)
  term expected;              // constant / threshold demanded by the rule
  bool holds = false;
  std::unique_ptr<proof_tree> sub;  // negation subtree
};

struct rule_proof {
  int rule_index = -1;
  bool holds = false;
  std::vector<proof_cond> conds;
};

struct proof_tree {
  atom goal;
  bool holds = false;
  bool via_fact = false;
  std::vector<rule_proof> attempts;
};

// Why `goal` holds or fails under p + f; consistent with evaluate().
proof_tree prove(const asp_program& p, const fact_set& f, const atom& goal);

// Lowercased identifier usable as an ASP symbol. Throws schema_error when
// the input cannot be mapped injectively enough.
std::string symbolize(const std::string& s);

}  // namespace rulegate

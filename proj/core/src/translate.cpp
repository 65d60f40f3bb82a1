#include "rulegate/translate.hpp"

#include <cctype>

#include "rulegate/errors.hpp"

namespace rulegate {

namespace {

bool canonical_integer(const std::string& s) {
  std::size_t i = s.size() && s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  if (s[i] == '0' && s.size() - i > 1) return false;  // no leading zeros
  if (s.size() - i > 18) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

class symbol_table {
 public:
  explicit symbol_table(std::map<std::string, std::string>& out) : out_(out) {}

  term cat_term(const std::string& v) {
    if (canonical_integer(v)) return term::integer(std::stoll(v));
    std::string sym = symbolize(v);
    auto it = out_.find(sym);
    if (it != out_.end() && it->second != v)
      throw schema_error("categories '" + it->second + "' and '" + v +
                         "' collide on symbol '" + sym + "'");
    out_[sym] = v;
    return term::sym(sym);
  }

 private:
  std::map<std::string, std::string>& out_;
};

}  // namespace

term categorical_term(const std::string& v) {
  if (canonical_integer(v)) return term::integer(std::stoll(v));
  return term::sym(symbolize(v));
}

namespace {

// Shared by class and abnormality rules: literal j becomes either an
// inlined constant atom or a fresh V_<attr>_<j> variable plus comparison.
void emit_body(const ruleset& rs, const rule& r, symbol_table& syms, int d,
               asp_rule& out) {
  for (std::size_t j = 0; j < r.body.size(); ++j) {
    const literal& lit = r.body[j];
    const attribute& attr = rs.attrs[lit.attr];
    bool numeric = attr.kind == attr_kind::numeric;
    term constant =
        numeric ? term::integer(lit.val.num_val().scaled(d))
                : syms.cat_term(lit.val.cat_val());
    if (lit.op == lit_op::eq) {
      out.body.push_back(
          body_elem::pos({attr.name, {term::var("X"), constant}}));
      continue;
    }
    term v = term::var("V_" + attr.name + "_" + std::to_string(j));
    out.body.push_back(body_elem::pos({attr.name, {term::var("X"), v}}));
    cmp_op op = lit.op == lit_op::neq ? cmp_op::neq
                : lit.op == lit_op::le ? cmp_op::le
                                       : cmp_op::gt;
    out.body.push_back(body_elem::compare({v, op, constant}));
  }
  for (int id : r.exceptions)
    out.body.push_back(body_elem::neg(
        {"ab" + std::to_string(id), {term::var("X"), term::sym("true")}}));
}

}  // namespace

translation translate(const ruleset& rs, int d) {
  if (d < 0) throw contract_error("scale exponent must be >= 0");
  translation t;
  t.target_class = rs.target_class;
  t.negative_class = rs.negative_class;
  t.attrs = rs.attrs;
  t.scale_exponent = d;
  t.program.scale_exponent = d;

  symbol_table syms(t.symbol_to_original);
  term target = syms.cat_term(rs.target_class);
  t.target_symbol = print_term(target);

  for (const auto& r : rs.rules) {
    asp_rule ar;
    ar.head = {"label", {term::var("X"), target}};
    emit_body(rs, r, syms, d, ar);
    t.program.rules.push_back(std::move(ar));
  }
  t.class_rule_count = t.program.rules.size();
  for (const auto& [id, list] : rs.ab_rules) {
    for (const auto& r : list) {
      asp_rule ar;
      ar.head = {"ab" + std::to_string(id),
                 {term::var("X"), term::sym("true")}};
      emit_body(rs, r, syms, d, ar);
      t.program.rules.push_back(std::move(ar));
    }
  }
  return t;
}

fact_set instance_to_facts(const std::vector<attribute>& attrs,
                           const instance& x, const std::string& id, int d) {
  if (x.values.size() != attrs.size())
    throw contract_error("instance/schema attribute count mismatch");
  fact_set f;
  term subject = term::sym(symbolize(id));
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const value& v = x.values[i];
    if (v.is_missing())
      throw contract_error("instance has missing values; preprocess first");
    term val = v.is_num() ? term::integer(v.num_val().scaled(d))
                          : categorical_term(v.cat_val());
    f.facts.push_back({attrs[i].name, {subject, val}});
  }
  return f;
}

fact_set instance_to_facts(const translation& t, const instance& x,
                           const std::string& id) {
  return instance_to_facts(t.attrs, x, id, t.scale_exponent);
}

atom label_atom(const translation& t, const std::string& id) {
  return {"label", {term::sym(symbolize(id)), categorical_term(t.target_class)}};
}

}  // namespace rulegate

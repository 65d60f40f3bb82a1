#include "rulegate/hybrid.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "rulegate/errors.hpp"

namespace rulegate {

const char* source_name(pred_source s) {
  switch (s) {
    case pred_source::ml: return "ml";
    case pred_source::asp_rule: return "asp_rule";
    case pred_source::asp_default: return "asp_default";
  }
  return "?";
}

prediction hybrid_predict(const trained_model& m, const translation& t,
                          const instance& x, const hybrid_config& cfg) {
  if (x.values.size() != t.attrs.size())
    throw contract_error("instance does not match the program's schema");

  prediction out;
  proba p = m.predict_proba(x);
  out.ml_label = p.positive > p.negative ? m.positive_class()
                                         : m.negative_class();
  out.ml_confidence = std::max(p.positive, p.negative);

  fact_set facts = instance_to_facts(t, x, x.id);
  model mod = evaluate(t.program, facts);
  atom goal = label_atom(t, x.id);
  bool derived = mod.contains(goal);
  out.asp_label = derived ? std::optional<std::string>(t.target_class)
                          : std::nullopt;

  if (out.ml_confidence > cfg.tau) {
    out.label = out.ml_label;
    out.source = pred_source::ml;
  } else if (derived) {
    out.label = t.target_class;
    out.source = pred_source::asp_rule;
    term subject = goal.args.front();
    for (std::size_t i = 0; i < t.class_rule_count; ++i) {
      if (rule_fires(t.program.rules[i], mod, {{"X", subject}})) {
        out.fired_rule = static_cast<int>(i);
        break;
      }
    }
  } else {
    out.label = t.negative_class;
    out.source = pred_source::asp_default;
  }
  out.corrected = out.label != out.ml_label;
  return out;
}

namespace {

bool is_numeric_attr(const translation& t, const std::string& pred) {
  for (const auto& a : t.attrs)
    if (a.name == pred) return a.kind == attr_kind::numeric;
  return false;
}

// Observed/required values as the explanation shows them: numeric facts are
// unscaled back to decimals, categorical ones quoted with their original
// spelling.
std::string shown_value(const translation& t, const std::string& pred,
                        const term& v) {
  if (v.kind == term_kind::number) {
    if (is_numeric_attr(t, pred))
      return decimal(v.num, t.scale_exponent).str();
    return "'" + std::to_string(v.num) + "'";
  }
  auto it = t.symbol_to_original.find(v.name);
  return "'" + (it != t.symbol_to_original.end() ? it->second : v.name) + "'";
}

const char* relation_phrase(cmp_op op) {
  switch (op) {
    case cmp_op::eq: return "equal";
    case cmp_op::neq: return "not equal";
    case cmp_op::le: return "be less than or equal to";
    case cmp_op::gt: return "be greater than";
    case cmp_op::lt: return "be less than";
    case cmp_op::ge: return "be greater than or equal to";
  }
  return "equal";
}

std::string status(bool holds) { return holds ? "holds" : "does not hold"; }

std::string condition_clause(const translation& t, const proof_cond& c) {
  if (c.k == proof_cond::kind::negation)
    return "exception " + print_atom(c.sub->goal) + " " + status(!c.holds) +
           " " + status(c.holds);
  std::string observed =
      c.has_observed ? shown_value(t, c.attr, c.observed) : "unknown";
  return "the value of " + c.attr + " is " + observed + " which should " +
         relation_phrase(c.op) + " " + shown_value(t, c.attr, c.expected) +
         " " + status(c.holds);
}

std::string goal_text(const translation& t, const atom& goal) {
  if (goal.pred == "label") return "label(X,'" + t.target_class + "')";
  return goal.pred + "(X, true)";
}

void render_tree(const translation& t, const proof_tree& tree, int indent,
                 std::vector<std::string>& out) {
  std::string goal = goal_text(t, tree.goal);
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (tree.attempts.empty()) {
    out.push_back(pad + "\"" + goal + " " + status(tree.holds) +
                  " because no rule defines it.\"");
    return;
  }
  for (const auto& attempt : tree.attempts) {
    std::string line = goal + " " + status(attempt.holds) + " because ";
    for (std::size_t i = 0; i < attempt.conds.size(); ++i) {
      if (i) line += " and ";
      line += condition_clause(t, attempt.conds[i]);
    }
    out.push_back(pad + "\"" + line + ".\"");
    for (const auto& c : attempt.conds)
      if (c.k == proof_cond::kind::negation && c.sub)
        render_tree(t, *c.sub, indent + 1, out);
  }
}

}  // namespace

explanation explain(const translation& t, const instance& x,
                    const prediction& pred) {
  explanation e;
  e.id = x.id;
  for (std::size_t i = 0; i < t.attrs.size(); ++i) {
    const value& v = x.values[i];
    std::string shown =
        v.is_cat() ? "'" + v.cat_val() + "'" : v.display();
    e.features.emplace_back(t.attrs[i].name, shown);
  }

  if (t.program.rules.empty()) {
    e.points.push_back("\"No rule applies; the default label '" +
                       t.negative_class + "' is used.\"");
  } else {
    fact_set facts = instance_to_facts(t, x, x.id);
    proof_tree tree = prove(t.program, facts, label_atom(t, x.id));
    render_tree(t, tree, 0, e.points);
  }

  std::string corrected = pred.corrected ? "yes" : "no";
  char conf[32];
  std::snprintf(conf, sizeof(conf), "%.2f", pred.ml_confidence);
  e.final_line = "Final label: '" + pred.label +
                 "' (source: " + source_name(pred.source) + ", ml: '" +
                 pred.ml_label + "' at confidence " + conf +
                 ", corrected: " + corrected + ")";
  return e;
}

std::string render(const explanation& e) {
  std::string out = "Instance: " + e.id + "\n";
  out += "Extracted Features: {";
  for (std::size_t i = 0; i < e.features.size(); ++i) {
    if (i) out += ", ";
    out += "'" + e.features[i].first + "': " + e.features[i].second;
  }
  out += "}\n";
  out += "Key Proof Tree Points:\n";
  int n = 0;
  for (const std::string& p : e.points) {
    if (!p.empty() && p[0] == ' ') {  // nested exception line
      out += "     - " + p.substr(p.find('"')) + "\n";
    } else {
      out += "  " + std::to_string(++n) + ". " + p + "\n";
    }
  }
  out += e.final_line + "\n";
  return out;
}

std::vector<std::pair<int, int>> rule_importance(
    const std::vector<prediction>& preds,
    const std::vector<std::string>& truths) {
  if (preds.size() != truths.size())
    throw contract_error("predictions and truths differ in length");
  std::map<int, int> counts;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const prediction& p = preds[i];
    if (p.source != pred_source::asp_rule) continue;
    if (p.label != truths[i] || p.ml_label == truths[i]) continue;
    ++counts[p.fired_rule];
  }
  std::vector<std::pair<int, int>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

}  // namespace rulegate

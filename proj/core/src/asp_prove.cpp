#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "rulegate/asp.hpp"
#include "rulegate/errors.hpp"

namespace rulegate {

namespace {

using subst = std::map<std::string, term>;

term resolve(const term& t, const subst& s) {
  if (!t.is_var()) return t;
  auto it = s.find(t.name);
  return it == s.end() ? t : it->second;
}

bool unify_atom(const atom& pattern, const atom& ground, subst& s) {
  if (pattern.pred != ground.pred || pattern.args.size() != ground.args.size())
    return false;
  subst saved = s;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    term lhs = resolve(pattern.args[i], s);
    if (lhs.is_var()) {
      s[lhs.name] = ground.args[i];
    } else if (!(lhs == ground.args[i])) {
      s = saved;
      return false;
    }
  }
  return true;
}

bool cmp_holds(const term& a, cmp_op op, const term& b) {
  bool same_kind = a.kind == b.kind;
  bool eq = same_kind && a == b;
  switch (op) {
    case cmp_op::eq: return eq;
    case cmp_op::neq: return !eq;
    default: break;
  }
  if (!same_kind || a.kind != term_kind::number) return false;
  switch (op) {
    case cmp_op::le: return a.num <= b.num;
    case cmp_op::gt: return a.num > b.num;
    case cmp_op::lt: return a.num < b.num;
    case cmp_op::ge: return a.num >= b.num;
    default: return false;
  }
}

class prover {
 public:
  prover(const asp_program& p, const fact_set& f)
      : program_(p), facts_(f), model_(evaluate(p, f)) {
    for (const auto& r : p.rules) rule_preds_.insert(r.head.pred);
    for (const auto& a : f.facts) fact_preds_.insert(a.pred);
  }

  proof_tree prove_goal(const atom& goal, bool top_level = true) {
    if (!goal.ground()) throw contract_error("proof goal must be ground");
    proof_tree tree;
    tree.goal = goal;
    if (!rule_preds_.count(goal.pred)) {
      if (!fact_preds_.count(goal.pred)) {
        // a subgoal nobody defines simply never holds; only an unknown
        // top-level goal is a caller mistake
        if (top_level)
          throw unknown_goal_error("no rules or facts for predicate '" +
                                   goal.pred + "'");
        tree.holds = false;
        return tree;
      }
      tree.via_fact = true;
      tree.holds = model_.contains(goal);
      return tree;
    }
    if (model_.contains(goal) && fact_preds_.count(goal.pred) &&
        std::find(facts_.facts.begin(), facts_.facts.end(), goal) !=
            facts_.facts.end()) {
      tree.via_fact = true;
      tree.holds = true;
      return tree;
    }
    for (std::size_t i = 0; i < program_.rules.size(); ++i) {
      const asp_rule& r = program_.rules[i];
      subst s;
      if (!unify_atom(r.head, goal, s)) continue;
      tree.attempts.push_back(attempt(r, static_cast<int>(i), s));
    }
    for (const auto& a : tree.attempts)
      if (a.holds) tree.holds = true;
    return tree;
  }

 private:
  // A rule attempt: find a satisfying grounding if one exists and report
  // each condition under it; otherwise report the first maximal binding.
  rule_proof attempt(const asp_rule& r, int index, const subst& start) {
    rule_proof rp;
    rp.rule_index = index;
    subst chosen;
    rp.holds = find_satisfying(r, start, chosen);
    if (!rp.holds) chosen = first_binding(r, start);
    rp.conds = walk_conditions(r, chosen);
    return rp;
  }

  bool find_satisfying(const asp_rule& r, subst s, subst& out) {
    std::vector<const atom*> pos = r.pos_atoms();
    std::function<bool(std::size_t, subst&)> go = [&](std::size_t i,
                                                      subst& cur) -> bool {
      if (i == pos.size()) {
        for (const auto& e : r.body) {
          if (e.kind == elem_kind::compare &&
              !cmp_holds(resolve(e.cmp.lhs, cur), e.cmp.op,
                         resolve(e.cmp.rhs, cur)))
            return false;
          if (e.kind == elem_kind::negative) {
            atom g;
            g.pred = e.a.pred;
            for (const auto& t : e.a.args) g.args.push_back(resolve(t, cur));
            if (model_.contains(g)) return false;
          }
        }
        out = cur;
        return true;
      }
      for (const auto& g : model_.atoms) {
        subst next = cur;
        if (unify_atom(*pos[i], g, next))
          if (go(i + 1, next)) return true;
      }
      return false;
    };
    return go(0, s);
  }

  // Greedy first-match binding used only when no grounding satisfies the
  // rule, so the failure report shows concrete observed values.
  subst first_binding(const asp_rule& r, subst s) {
    for (const auto& e : r.body) {
      if (e.kind != elem_kind::positive) continue;
      for (const auto& g : model_.atoms) {
        subst next = s;
        if (unify_atom(e.a, g, next)) {
          s = next;
          break;
        }
      }
    }
    return s;
  }

  std::vector<proof_cond> walk_conditions(const asp_rule& r, const subst& s) {
    std::vector<proof_cond> out;
    for (const auto& e : r.body) {
      switch (e.kind) {
        case elem_kind::positive: {
          atom g;
          g.pred = e.a.pred;
          bool ground = true;
          for (const auto& t : e.a.args) {
            term rt = resolve(t, s);
            if (rt.is_var()) ground = false;
            g.args.push_back(rt);
          }
          bool holds = ground && model_.contains(g);
          // A variable-binding atom is plumbing, not a condition, unless
          // it failed to bind at all.
          bool constrains = constant_arg(e.a, s) != nullptr;
          if (!constrains && holds) break;
          proof_cond c;
          c.k = proof_cond::kind::atom_check;
          c.attr = e.a.pred;
          c.holds = holds;
          if (const term* req = constant_arg(e.a, s)) c.expected = *req;
          if (const term* obs = observed_value(e.a, s)) {
            c.has_observed = true;
            c.observed = *obs;
          }
          out.push_back(std::move(c));
          break;
        }
        case elem_kind::compare: {
          proof_cond c;
          c.k = proof_cond::kind::compare;
          c.op = e.cmp.op;
          term lhs = resolve(e.cmp.lhs, s);
          term rhs = resolve(e.cmp.rhs, s);
          c.attr = origin_pred(r, e.cmp.lhs);
          c.has_observed = !lhs.is_var();
          c.observed = lhs;
          c.expected = rhs;
          c.holds = !lhs.is_var() && !rhs.is_var() &&
                    cmp_holds(lhs, e.cmp.op, rhs);
          out.push_back(std::move(c));
          break;
        }
        case elem_kind::negative: {
          proof_cond c;
          c.k = proof_cond::kind::negation;
          c.attr = e.a.pred;
          atom g;
          g.pred = e.a.pred;
          for (const auto& t : e.a.args) g.args.push_back(resolve(t, s));
          c.sub = std::make_unique<proof_tree>(prove_goal(g, false));
          c.holds = !c.sub->holds;
          out.push_back(std::move(c));
          break;
        }
      }
    }
    return out;
  }

  // For attr(X, c): the constant the rule demands of the instance value.
  const term* constant_arg(const atom& a, const subst& s) {
    if (a.args.size() < 2) return nullptr;
    const term& t = a.args.back();
    if (!t.is_var()) return &t;
    // variable bound before this atom counts as a demand too
    auto it = s.find(t.name);
    (void)it;
    return nullptr;
  }

  // The fact value carried by the same predicate for the already-bound
  // leading arguments (the instance id, for translated programs).
  const term* observed_value(const atom& a, const subst& s) {
    if (a.args.size() < 2) return nullptr;
    term lead = resolve(a.args.front(), s);
    if (lead.is_var()) return nullptr;
    for (const auto& g : model_.atoms) {
      if (g.pred != a.pred || g.args.size() != a.args.size()) continue;
      if (g.args.front() == lead) return &g.args.back();
    }
    return nullptr;
  }

  // The predicate whose atom binds `t`, for naming comparisons after the
  // attribute they constrain.
  std::string origin_pred(const asp_rule& r, const term& t) {
    if (!t.is_var()) return "";
    for (const auto& e : r.body) {
      if (e.kind != elem_kind::positive) continue;
      for (const auto& arg : e.a.args)
        if (arg.is_var() && arg.name == t.name) return e.a.pred;
    }
    return "";
  }

  const asp_program& program_;
  const fact_set& facts_;
  model model_;
  std::set<std::string> rule_preds_;
  std::set<std::string> fact_preds_;
};

}  // namespace

proof_tree prove(const asp_program& p, const fact_set& f, const atom& goal) {
  prover pr(p, f);
  return pr.prove_goal(goal);
}

}  // namespace rulegate

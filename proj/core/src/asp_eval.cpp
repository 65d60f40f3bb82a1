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
  if (it == s.end()) return t;
  return it->second;
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

// Total comparison semantics: integer order on numbers, equality on
// symbols; mixed kinds are unequal and unordered.
bool comparison_holds(const comparison& c, const subst& s) {
  term a = resolve(c.lhs, s);
  term b = resolve(c.rhs, s);
  if (a.is_var() || b.is_var())
    throw safety_error("comparison on unbound variable: " +
                       print_comparison(c));
  bool same_kind = a.kind == b.kind;
  bool eq = same_kind && a == b;
  switch (c.op) {
    case cmp_op::eq: return eq;
    case cmp_op::neq: return !eq;
    default: break;
  }
  if (!same_kind || a.kind != term_kind::number) return false;
  switch (c.op) {
    case cmp_op::le: return a.num <= b.num;
    case cmp_op::gt: return a.num > b.num;
    case cmp_op::lt: return a.num < b.num;
    case cmp_op::ge: return a.num >= b.num;
    default: return false;
  }
}

atom substitute(const atom& a, const subst& s) {
  atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(resolve(t, s));
  return out;
}

// Enumerates substitutions matching the rule's positive atoms (in body
// order) against `m`, then checks comparisons and negated atoms. Calls
// `sink` with each satisfying substitution; stops early when it returns
// true.
bool for_each_match(const asp_rule& r, const model& m, subst s,
                    const std::function<bool(const subst&)>& sink) {
  std::vector<const atom*> pos = r.pos_atoms();
  std::vector<const atom*> stack;
  std::function<bool(std::size_t, subst&)> go = [&](std::size_t i,
                                                    subst& cur) -> bool {
    if (i == pos.size()) {
      for (const auto& e : r.body) {
        if (e.kind == elem_kind::compare && !comparison_holds(e.cmp, cur))
          return false;
        if (e.kind == elem_kind::negative) {
          atom g = substitute(e.a, cur);
          if (!g.ground())
            throw safety_error("negated atom not ground: " + print_atom(e.a));
          if (m.contains(g)) return false;
        }
      }
      return sink(cur);
    }
    for (const auto& g : m.atoms) {
      subst next = cur;
      if (unify_atom(*pos[i], g, next))
        if (go(i + 1, next)) return true;
    }
    return false;
  };
  return go(0, s);
}

}  // namespace

std::vector<std::pair<std::string, int>> stratify(const asp_program& p) {
  std::map<std::string, int> stratum;
  auto touch = [&](const std::string& pred) {
    stratum.emplace(pred, 0);
  };
  for (const auto& r : p.rules) {
    touch(r.head.pred);
    for (const auto& e : r.body)
      if (e.kind != elem_kind::compare) touch(e.a.pred);
  }
  std::size_t n = stratum.size();
  bool changed = true;
  for (std::size_t round = 0; changed; ++round) {
    if (round > n + 1)
      throw stratification_error("cycle through negation");
    changed = false;
    for (const auto& r : p.rules) {
      int& h = stratum[r.head.pred];
      for (const auto& e : r.body) {
        if (e.kind == elem_kind::positive && stratum[e.a.pred] > h) {
          h = stratum[e.a.pred];
          changed = true;
        }
        if (e.kind == elem_kind::negative && stratum[e.a.pred] + 1 > h) {
          h = stratum[e.a.pred] + 1;
          changed = true;
        }
      }
    }
  }
  return {stratum.begin(), stratum.end()};
}

model evaluate(const asp_program& p, const fact_set& f) {
  auto strata = stratify(p);
  std::map<std::string, int> level(strata.begin(), strata.end());
  int max_level = 0;
  for (const auto& [pred, s] : strata) max_level = std::max(max_level, s);

  model m;
  for (const auto& a : f.facts) {
    if (!a.ground()) throw contract_error("fact set contains variables");
    m.atoms.insert(a);
  }

  for (int s = 0; s <= max_level; ++s) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : p.rules) {
        if (level[r.head.pred] != s) continue;
        for_each_match(r, m, {}, [&](const subst& sub) {
          atom h = substitute(r.head, sub);
          if (!h.ground())
            throw safety_error("derived head not ground: " +
                               print_atom(r.head));
          if (m.atoms.insert(h).second) changed = true;
          return false;  // keep enumerating
        });
      }
    }
  }
  return m;
}

bool rule_fires(const asp_rule& r, const model& m,
                const std::vector<std::pair<std::string, term>>& bound) {
  subst s;
  for (const auto& [name, t] : bound) s[name] = t;
  return for_each_match(r, m, s, [](const subst&) { return true; });
}

}  // namespace rulegate

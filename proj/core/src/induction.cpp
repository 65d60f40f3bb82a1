#include "rulegate/induction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "rulegate/errors.hpp"

namespace rulegate {

bool literal_holds(const literal& lit, const instance& x) {
  const value& v = x.values[lit.attr];
  bool same_kind = v.kind() == lit.val.kind() && !v.is_missing();
  switch (lit.op) {
    case lit_op::eq: return same_kind && v == lit.val;
    case lit_op::neq: return !(same_kind && v == lit.val);
    case lit_op::le:
      return same_kind && v.is_num() && v.num_val() <= lit.val.num_val();
    case lit_op::gt:
      return same_kind && v.is_num() && v.num_val() > lit.val.num_val();
  }
  return false;
}

bool ruleset::rule_fires(const rule& r, const instance& x) const {
  for (const auto& lit : r.body)
    if (!literal_holds(lit, x)) return false;
  for (int id : r.exceptions)
    if (ab_holds(id, x)) return false;
  return true;
}

bool ruleset::ab_holds(int id, const instance& x) const {
  auto it = ab_rules.find(id);
  if (it == ab_rules.end()) return false;
  for (const auto& r : it->second)
    if (rule_fires(r, x)) return true;
  return false;
}

const std::string& ruleset::predict(const instance& x) const {
  for (const auto& r : rules)
    if (rule_fires(r, x)) return target_class;
  return negative_class;
}

std::size_t ruleset::rule_count() const {
  std::size_t n = rules.size();
  for (const auto& [id, list] : ab_rules) n += list.size();
  return n;
}

namespace {

double xlogx(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy(double p, double n) {
  double tot = p + n;
  if (tot <= 0.0) return 0.0;
  return -xlogx(p / tot) - xlogx(n / tot);
}

// Split information gain: parent entropy minus weighted entropy of the
// covered / uncovered partition.
double split_gain(double tp, double fp, double P, double N) {
  double n = P + N;
  double cov = tp + fp;
  double unc = n - cov;
  return entropy(P, N) - (cov / n) * entropy(tp, fp) -
         (unc / n) * entropy(P - tp, N - fp);
}

constexpr double kGainEps = 1e-9;

struct candidate_best {
  bool found = false;
  literal lit;
  double gain = 0.0;

  // Candidates arrive in tie-break order, so strict improvement suffices.
  void offer(const literal& l, double g,
             const std::vector<literal>& used) {
    if (g <= kGainEps) return;
    if (found && g <= gain) return;
    if (std::find(used.begin(), used.end(), l) != used.end()) return;
    found = true;
    lit = l;
    gain = g;
  }
};

}  // namespace

std::optional<scored_literal> best_literal(
    const dataset& ds, const std::vector<std::size_t>& pos,
    const std::vector<std::size_t>& neg, const std::vector<literal>& used) {
  if (pos.empty()) throw contract_error("best_literal: no positive examples");
  double P = static_cast<double>(pos.size());
  double N = static_cast<double>(neg.size());
  candidate_best best;

  for (std::size_t f = 0; f < ds.features().size(); ++f) {
    int attr = static_cast<int>(f);
    if (ds.features()[f].kind == attr_kind::categorical) {
      // counts per category
      std::map<std::string, std::pair<long, long>> counts;
      for (std::size_t i : pos) {
        const value& v = ds.row(i).values[f];
        if (v.is_cat()) ++counts[v.cat_val()].first;
      }
      for (std::size_t i : neg) {
        const value& v = ds.row(i).values[f];
        if (v.is_cat()) ++counts[v.cat_val()].second;
      }
      for (const auto& [cat, pn] : counts) {  // eq, ascending value
        double tp = static_cast<double>(pn.first);
        double fp = static_cast<double>(pn.second);
        if (tp >= 1.0)
          best.offer({attr, lit_op::eq, value::cat(cat)},
                     split_gain(tp, fp, P, N), used);
      }
      for (const auto& [cat, pn] : counts) {  // neq
        double tp = P - static_cast<double>(pn.first);
        double fp = N - static_cast<double>(pn.second);
        if (tp >= 1.0)
          best.offer({attr, lit_op::neq, value::cat(cat)},
                     split_gain(tp, fp, P, N), used);
      }
    } else {
      // distinct observed values ascending with per-value counts
      std::vector<std::pair<decimal, std::pair<long, long>>> vals;
      auto add = [&](const value& v, bool is_pos) {
        if (!v.is_num()) return;
        const decimal& d = v.num_val();
        auto it = std::lower_bound(
            vals.begin(), vals.end(), d,
            [](const auto& a, const decimal& b) { return a.first < b; });
        if (it == vals.end() || !(it->first == d))
          it = vals.insert(it, {d, {0, 0}});
        (is_pos ? it->second.first : it->second.second) += 1;
      };
      for (std::size_t i : pos) add(ds.row(i).values[f], true);
      for (std::size_t i : neg) add(ds.row(i).values[f], false);

      // prefix counts: covered by (x <= v) for each distinct v
      long cum_p = 0, cum_n = 0;
      std::vector<std::pair<long, long>> prefix(vals.size());
      for (std::size_t k = 0; k < vals.size(); ++k) {
        cum_p += vals[k].second.first;
        cum_n += vals[k].second.second;
        prefix[k] = {cum_p, cum_n};
      }
      long total_p = cum_p, total_n = cum_n;
      for (std::size_t k = 0; k < vals.size(); ++k) {  // le, ascending
        double tp = static_cast<double>(prefix[k].first);
        double fp = static_cast<double>(prefix[k].second);
        if (tp >= 1.0)
          best.offer({attr, lit_op::le, value::num(vals[k].first)},
                     split_gain(tp, fp, P, N), used);
      }
      for (std::size_t k = 0; k < vals.size(); ++k) {  // gt, ascending
        double tp = static_cast<double>(total_p - prefix[k].first);
        double fp = static_cast<double>(total_n - prefix[k].second);
        if (tp >= 1.0)
          best.offer({attr, lit_op::gt, value::num(vals[k].first)},
                     split_gain(tp, fp, P, N), used);
      }
    }
  }

  if (!best.found) return std::nullopt;
  return scored_literal{best.lit, best.gain};
}

namespace {

// Rule under construction; exceptions stay nested until the whole set is
// flattened, so discarded rules never register abnormality ids.
struct draft_rule {
  std::vector<literal> body;
  std::vector<draft_rule> exceptions;
};

struct learn_ctx {
  const dataset& ds;
  const learner_params& params;
};

bool body_covers(const std::vector<literal>& body, const instance& x) {
  for (const auto& lit : body)
    if (!literal_holds(lit, x)) return false;
  return true;
}

std::vector<std::size_t> covered_by(const learn_ctx& c,
                                    const std::vector<literal>& body,
                                    const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> out;
  for (std::size_t i : idx)
    if (body_covers(body, c.ds.row(i))) out.push_back(i);
  return out;
}

std::vector<draft_rule> fold(learn_ctx& c, std::vector<std::size_t> pos,
                             std::vector<std::size_t> neg, int depth,
                             const std::vector<literal>& used);

// Greedy conjunction of best literals. The loop stops once the covered
// false positives drop to ratio * covered true positives; whatever impurity
// remains is handed to recursive exception learning with the roles swapped.
draft_rule learn_rule(learn_ctx& c, const std::vector<std::size_t>& pos,
                      const std::vector<std::size_t>& neg, int depth,
                      std::vector<literal> used) {
  draft_rule r;
  std::vector<std::size_t> cur_pos = pos;
  std::vector<std::size_t> cur_neg = neg;
  while (!cur_neg.empty() &&
         static_cast<int>(r.body.size()) < c.params.max_rule_literals) {
    auto pick = best_literal(c.ds, cur_pos, cur_neg, used);
    if (!pick) break;
    r.body.push_back(pick->lit);
    used.push_back(pick->lit);
    std::vector<std::size_t> next_pos, next_neg;
    for (std::size_t i : cur_pos)
      if (literal_holds(pick->lit, c.ds.row(i))) next_pos.push_back(i);
    for (std::size_t i : cur_neg)
      if (literal_holds(pick->lit, c.ds.row(i))) next_neg.push_back(i);
    cur_pos = std::move(next_pos);
    cur_neg = std::move(next_neg);
    if (!cur_neg.empty() &&
        static_cast<double>(cur_neg.size()) <=
            c.params.ratio * static_cast<double>(cur_pos.size()))
      break;
  }
  if (!r.body.empty() && !cur_neg.empty() &&
      depth < c.params.max_exception_depth)
    r.exceptions = fold(c, cur_neg, cur_pos, depth + 1, used);
  return r;
}

std::vector<draft_rule> fold(learn_ctx& c, std::vector<std::size_t> pos,
                             std::vector<std::size_t> neg, int depth,
                             const std::vector<literal>& used) {
  std::vector<draft_rule> rules;
  double initial = static_cast<double>(pos.size());
  while (!pos.empty() &&
         static_cast<double>(pos.size()) >
             c.params.tail_fraction * initial) {
    draft_rule r = learn_rule(c, pos, neg, depth, used);
    if (r.body.empty()) break;  // nothing gains: no catch-all rules
    std::vector<std::size_t> covered = covered_by(c, r.body, pos);
    if (covered.empty()) break;
    std::set<std::size_t> drop(covered.begin(), covered.end());
    std::vector<std::size_t> remaining;
    for (std::size_t i : pos)
      if (!drop.count(i)) remaining.push_back(i);
    pos = std::move(remaining);
    rules.push_back(std::move(r));
  }
  return rules;
}

// Post-order id assignment: a rule's own exceptions are registered before
// the rule itself, so every reference points at a smaller id.
rule flatten(ruleset& rs, const draft_rule& d) {
  rule out;
  out.body = d.body;
  for (const auto& e : d.exceptions) {
    rule fe = flatten(rs, e);
    int id = rs.next_ab_index++;
    rs.ab_rules[id].push_back(std::move(fe));
    out.exceptions.push_back(id);
  }
  return out;
}

}  // namespace

ruleset learn(const dataset& train, const std::string& target,
              const learner_params& params) {
  if (target != train.positive_class() && target != train.negative_class())
    throw contract_error("target class '" + target + "' not in dataset");
  ruleset rs;
  rs.target_class = target;
  rs.negative_class = target == train.positive_class()
                          ? train.negative_class()
                          : train.positive_class();
  rs.attrs = train.features();

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < train.size(); ++i)
    (train.label(i) == target ? pos : neg).push_back(i);
  if (pos.empty()) return rs;  // predicts the negative class always

  learn_ctx ctx{train, params};
  std::vector<draft_rule> drafts = fold(ctx, pos, neg, 0, {});
  for (const auto& d : drafts) rs.rules.push_back(flatten(rs, d));
  return prune(std::move(rs), train, params);
}

ruleset prune(ruleset rs, const dataset& train,
              const learner_params& params) {
  std::vector<rule> kept;
  for (const auto& r : rs.rules) {
    long tp = 0, fp = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (!rs.rule_fires(r, train.row(i))) continue;
      if (train.label(i) == rs.target_class)
        ++tp;
      else
        ++fp;
    }
    if (static_cast<double>(tp) <
        params.ratio * static_cast<double>(tp + fp))
      continue;
    kept.push_back(r);
  }
  rs.rules = std::move(kept);

  // drop abnormality rules no longer reachable
  std::set<int> live;
  std::function<void(const rule&)> mark = [&](const rule& r) {
    for (int id : r.exceptions) {
      if (!live.insert(id).second) continue;
      auto it = rs.ab_rules.find(id);
      if (it != rs.ab_rules.end())
        for (const auto& ar : it->second) mark(ar);
    }
  };
  for (const auto& r : rs.rules) mark(r);
  for (auto it = rs.ab_rules.begin(); it != rs.ab_rules.end();)
    it = live.count(it->first) ? std::next(it) : rs.ab_rules.erase(it);

  // exception references must stay acyclic (ids only point downward)
  for (const auto& [id, list] : rs.ab_rules)
    for (const auto& r : list)
      for (int e : r.exceptions)
        if (e >= id)
          throw stratification_error("abnormality ab" + std::to_string(id) +
                                     " references ab" + std::to_string(e));
  return rs;
}

std::string literal_str(const ruleset& rs, const literal& lit) {
  static const char* ops[] = {"=", "!=", "<=", ">"};
  return rs.attrs[lit.attr].name + " " + ops[static_cast<int>(lit.op)] + " " +
         lit.val.display();
}

}  // namespace rulegate

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rulegate/dataset.hpp"

namespace rulegate {

enum class lit_op { eq, neq, le, gt };

struct literal {
  int attr = -1;  // feature index
  lit_op op = lit_op::eq;
  value val;
  bool operator==(const literal& o) const {
    return attr == o.attr && op == o.op && val == o.val;
  }
};

// le/gt demand numeric operands; comparisons across kinds are false for
// eq/le/gt and true for neq.
bool literal_holds(const literal& lit, const instance& x);

struct rule {
  std::vector<literal> body;    // conjunction
  std::vector<int> exceptions;  // abnormality ids, consumed under negation
};

struct learner_params {
  double ratio = 0.5;          // exception hand-off and pruning threshold
  int max_rule_literals = 10;
  int max_exception_depth = 5;
  double tail_fraction = 0.0;  // residual positives tolerated
};

// Ordered default rules with exceptions. Abnormality ids are assigned in
// creation order (children before the rule that negates them), so the
// exception graph is acyclic by construction.
class ruleset {
 public:
  std::string target_class;
  std::string negative_class;
  std::vector<attribute> attrs;
  std::vector<rule> rules;                  // class-head rules, disjunctive
  std::map<int, std::vector<rule>> ab_rules;
  int next_ab_index = 1;

  bool rule_fires(const rule& r, const instance& x) const;
  bool ab_holds(int id, const instance& x) const;

  // Target class iff any class-head rule fires.
  const std::string& predict(const instance& x) const;

  // Number of class rules plus abnormality rules.
  std::size_t rule_count() const;
};

inline const std::string& predict_native(const ruleset& rs,
                                         const instance& x) {
  return rs.predict(x);
}

struct scored_literal {
  literal lit;
  double gain = 0.0;
};

// Literal with maximal split information gain among candidates covering at
// least one positive; ties fall to schema order, then eq < neq < le < gt,
// then ascending value. Returns nullopt when nothing gains.
std::optional<scored_literal> best_literal(
    const dataset& ds, const std::vector<std::size_t>& pos,
    const std::vector<std::size_t>& neg, const std::vector<literal>& used);

// Sequential covering with recursive exception learning, then pruning.
ruleset learn(const dataset& train, const std::string& target,
              const learner_params& params = {});

// Drops class rules with TP < ratio * (TP + FP) on `train`, then any
// abnormality rules left unreferenced.
ruleset prune(ruleset rs, const dataset& train, const learner_params& params);

std::string literal_str(const ruleset& rs, const literal& lit);

}  // namespace rulegate

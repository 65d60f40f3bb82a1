#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rulegate/classifiers.hpp"
#include "rulegate/translate.hpp"

namespace rulegate {

struct hybrid_config {
  double tau = 0.6;  // ML confidence must strictly exceed this to pass
};

enum class pred_source { ml, asp_rule, asp_default };

const char* source_name(pred_source s);

struct prediction {
  std::string label;
  std::string ml_label;
  double ml_confidence = 0.0;
  std::optional<std::string> asp_label;  // nullopt = rules abstained
  pred_source source = pred_source::ml;
  bool corrected = false;     // label != ml_label
  int fired_rule = -1;        // first class rule that fired, when gated
};

// Confidence gate: above tau the ML label stands; otherwise the rules
// decide, falling back to the negative class when nothing fires.
prediction hybrid_predict(const trained_model& m, const translation& t,
                          const instance& x, const hybrid_config& cfg);

struct explanation {
  std::string id;
  std::vector<std::pair<std::string, std::string>> features;  // attr, shown value
  std::vector<std::string> points;  // rendered proof-tree lines, nested ones indented
  std::string final_line;
};

// Proof tree of the target label goal rendered into fixed-template lines;
// produced for every prediction, corrections or not.
explanation explain(const translation& t, const instance& x,
                    const prediction& pred);

std::string render(const explanation& e);

// Rules ranked by how often their override fixed an ML mistake; rules with
// no corrections are omitted.
std::vector<std::pair<int, int>> rule_importance(
    const std::vector<prediction>& preds,
    const std::vector<std::string>& truths);

}  // namespace rulegate

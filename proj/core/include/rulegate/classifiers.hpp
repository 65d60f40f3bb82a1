#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rulegate/dataset.hpp"
#include "rulegate/rng.hpp"

namespace rulegate {

struct classifier_kind {
  enum class family { knn, random_forest, mlp, linear_svm };
  family fam = family::knn;

  int k = 5;                     // knn
  int trees = 100;               // random forest
  int max_depth = 0;             // 0 = unbounded
  std::vector<int> hidden{16};   // mlp layer widths
  int epochs = 200;              // mlp / linear svm
  double learning_rate = 0.01;   // mlp
  double regularization = 0.01;  // linear svm

  static classifier_kind knn(int k = 5);
  static classifier_kind random_forest(int trees = 100, int max_depth = 0);
  static classifier_kind mlp(std::vector<int> hidden = {16}, int epochs = 200,
                             double learning_rate = 0.01);
  static classifier_kind linear_svm(int epochs = 200,
                                    double regularization = 0.01);

  std::string name() const;
};

struct proba {
  double positive = 0.0;
  double negative = 0.0;
};

// One-hot encoding for categorical attributes plus min-max scaling to [0,1]
// for numeric ones; ranges and category vocabularies come from train only.
class feature_transform {
 public:
  static feature_transform fit(const dataset& train);
  std::vector<double> apply(const instance& x) const;
  std::size_t dim() const { return dim_; }

 private:
  struct column {
    attr_kind kind;
    double lo = 0.0, span = 1.0;            // numeric
    std::vector<std::string> categories;    // categorical, sorted
  };
  std::vector<column> cols_;
  std::size_t dim_ = 0;
};

class trained_model {
 public:
  virtual ~trained_model() = default;

  virtual proba predict_proba(const instance& x) const = 0;

  // argmax of predict_proba; an exact tie goes to the negative class
  const std::string& predict(const instance& x) const;

  const std::string& positive_class() const { return positive_; }
  const std::string& negative_class() const { return negative_; }
  const feature_transform& transform() const { return ft_; }

 protected:
  trained_model(feature_transform ft, std::string pos, std::string neg)
      : ft_(std::move(ft)), positive_(std::move(pos)), negative_(std::move(neg)) {}
  feature_transform ft_;
  std::string positive_;
  std::string negative_;
};

// Deterministic for a fixed (kind, train, seed); throws
// degenerate_model_error when train carries a single class.
std::unique_ptr<trained_model> fit(const classifier_kind& kind,
                                   const dataset& train, std::uint64_t seed);

// Plain feed-forward net with sigmoid activations and one sigmoid output;
// exposed so gradients can be checked against finite differences.
struct mlp_net {
  std::vector<int> sizes;                    // input, hidden..., 1
  std::vector<std::vector<double>> weights;  // per layer, row-major
  std::vector<std::vector<double>> biases;

  void init(const std::vector<int>& layer_sizes, rng& gen);
  double forward(const std::vector<double>& x) const;
  // Mean binary cross-entropy over the batch.
  double loss(const std::vector<std::vector<double>>& xs,
              const std::vector<int>& ys) const;
  void gradient(const std::vector<std::vector<double>>& xs,
                const std::vector<int>& ys,
                std::vector<std::vector<double>>& gw,
                std::vector<std::vector<double>>& gb) const;
  void step(const std::vector<std::vector<double>>& gw,
            const std::vector<std::vector<double>>& gb, double lr);
};

}  // namespace rulegate

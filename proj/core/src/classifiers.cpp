#include "rulegate/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rulegate/errors.hpp"

namespace rulegate {

classifier_kind classifier_kind::knn(int k) {
  classifier_kind c;
  c.fam = family::knn;
  c.k = k;
  return c;
}

classifier_kind classifier_kind::random_forest(int trees, int max_depth) {
  classifier_kind c;
  c.fam = family::random_forest;
  c.trees = trees;
  c.max_depth = max_depth;
  return c;
}

classifier_kind classifier_kind::mlp(std::vector<int> hidden, int epochs,
                                     double learning_rate) {
  classifier_kind c;
  c.fam = family::mlp;
  c.hidden = std::move(hidden);
  c.epochs = epochs;
  c.learning_rate = learning_rate;
  return c;
}

classifier_kind classifier_kind::linear_svm(int epochs,
                                            double regularization) {
  classifier_kind c;
  c.fam = family::linear_svm;
  c.epochs = epochs;
  c.regularization = regularization;
  return c;
}

std::string classifier_kind::name() const {
  switch (fam) {
    case family::knn: return "knn";
    case family::random_forest: return "rf";
    case family::mlp: return "mlp";
    case family::linear_svm: return "linear_svm";
  }
  return "?";
}

feature_transform feature_transform::fit(const dataset& train) {
  feature_transform ft;
  const auto& feats = train.features();
  ft.cols_.resize(feats.size());
  for (std::size_t f = 0; f < feats.size(); ++f) {
    column& col = ft.cols_[f];
    col.kind = feats[f].kind;
    if (col.kind == attr_kind::numeric) {
      double lo = 0.0, hi = 0.0;
      bool first = true;
      for (std::size_t i = 0; i < train.size(); ++i) {
        const value& v = train.row(i).values[f];
        if (!v.is_num()) continue;
        double x = v.num_val().to_double();
        if (first) {
          lo = hi = x;
          first = false;
        } else {
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
      col.lo = lo;
      col.span = hi > lo ? hi - lo : 1.0;
      ft.dim_ += 1;
    } else {
      std::set<std::string> cats;
      for (std::size_t i = 0; i < train.size(); ++i) {
        const value& v = train.row(i).values[f];
        if (v.is_cat()) cats.insert(v.cat_val());
      }
      col.categories.assign(cats.begin(), cats.end());
      ft.dim_ += col.categories.size();
    }
  }
  return ft;
}

std::vector<double> feature_transform::apply(const instance& x) const {
  std::vector<double> out;
  out.reserve(dim_);
  for (std::size_t f = 0; f < cols_.size(); ++f) {
    const column& col = cols_[f];
    const value& v = x.values[f];
    if (col.kind == attr_kind::numeric) {
      double raw = v.is_num() ? v.num_val().to_double() : col.lo;
      out.push_back((raw - col.lo) / col.span);
    } else {
      for (const auto& c : col.categories)
        out.push_back(v.is_cat() && v.cat_val() == c ? 1.0 : 0.0);
    }
  }
  return out;
}

const std::string& trained_model::predict(const instance& x) const {
  proba p = predict_proba(x);
  return p.positive > p.negative ? positive_ : negative_;
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct labelled_points {
  feature_transform ft;
  std::vector<std::vector<double>> x;
  std::vector<int> y;  // 1 = positive class
};

labelled_points prepare(const dataset& train) {
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < train.size(); ++i)
    (train.is_positive(i) ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw degenerate_model_error("training data carries a single class");
  labelled_points pts;
  pts.ft = feature_transform::fit(train);
  pts.x.reserve(train.size());
  pts.y.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    pts.x.push_back(pts.ft.apply(train.row(i)));
    pts.y.push_back(train.is_positive(i) ? 1 : 0);
  }
  return pts;
}

double sq_distance(const std::vector<double>& a,
                   const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// ---- KNN -------------------------------------------------------------

class knn_model : public trained_model {
 public:
  knn_model(labelled_points pts, int k, std::string pos, std::string neg)
      : trained_model(std::move(pts.ft), std::move(pos), std::move(neg)),
        x_(std::move(pts.x)),
        y_(std::move(pts.y)),
        k_(std::min<std::size_t>(std::max(k, 1), y_.size())) {}

  proba predict_proba(const instance& inst) const override {
    std::vector<double> q = ft_.apply(inst);
    std::vector<std::pair<double, std::size_t>> d(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i)
      d[i] = {sq_distance(q, x_[i]), i};
    // distance ties resolved by training index
    std::partial_sort(d.begin(), d.begin() + k_, d.end());
    std::size_t votes = 0;
    for (std::size_t i = 0; i < k_; ++i) votes += y_[d[i].second];
    double p = static_cast<double>(votes) / static_cast<double>(k_);
    return {p, 1.0 - p};
  }

 private:
  std::vector<std::vector<double>> x_;
  std::vector<int> y_;
  std::size_t k_;
};

// ---- random forest -----------------------------------------------------

struct tree_node {
  int feature = -1;     // -1: leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  int label = 0;
};

class decision_tree {
 public:
  void fit(const std::vector<std::vector<double>>& x,
           const std::vector<int>& y, const std::vector<std::size_t>& rows,
           int max_depth, rng& gen) {
    nodes_.clear();
    build(x, y, rows, 0, max_depth, gen);
  }

  int predict(const std::vector<double>& q) const {
    int n = 0;
    while (nodes_[n].feature >= 0)
      n = q[nodes_[n].feature] <= nodes_[n].threshold ? nodes_[n].left
                                                      : nodes_[n].right;
    return nodes_[n].label;
  }

 private:
  static double gini(double p, double n) {
    double tot = p + n;
    if (tot <= 0.0) return 0.0;
    double fp = p / tot, fn = n / tot;
    return 1.0 - fp * fp - fn * fn;
  }

  int build(const std::vector<std::vector<double>>& x,
            const std::vector<int>& y, const std::vector<std::size_t>& rows,
            int depth, int max_depth, rng& gen) {
    long pos = 0;
    for (std::size_t r : rows) pos += y[r];
    long neg = static_cast<long>(rows.size()) - pos;
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    // majority label; exact tie falls to the negative class
    nodes_[idx].label = pos > neg ? 1 : 0;
    if (pos == 0 || neg == 0 ||
        (max_depth > 0 && depth >= max_depth) || rows.size() < 2)
      return idx;

    std::size_t dim = x[0].size();
    std::size_t m = static_cast<std::size_t>(
        std::max(1.0, std::floor(std::sqrt(static_cast<double>(dim)))));
    std::vector<std::size_t> feats(dim);
    for (std::size_t i = 0; i < dim; ++i) feats[i] = i;
    gen.shuffle(feats);
    feats.resize(m);
    std::sort(feats.begin(), feats.end());

    double parent = gini(static_cast<double>(pos), static_cast<double>(neg));
    double best_gain = 1e-12;
    int best_f = -1;
    double best_t = 0.0;
    for (std::size_t f : feats) {
      std::vector<std::pair<double, int>> vals(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        vals[i] = {x[rows[i]][f], y[rows[i]]};
      std::sort(vals.begin(), vals.end());
      double lp = 0, ln = 0, rp = static_cast<double>(pos),
             rn = static_cast<double>(neg);
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        if (vals[i].second)
          ++lp, --rp;
        else
          ++ln, --rn;
        if (vals[i].first == vals[i + 1].first) continue;
        double nl = lp + ln, nr = rp + rn, n = nl + nr;
        double gain =
            parent - (nl / n) * gini(lp, ln) - (nr / n) * gini(rp, rn);
        if (gain > best_gain) {
          best_gain = gain;
          best_f = static_cast<int>(f);
          best_t = (vals[i].first + vals[i + 1].first) / 2.0;
        }
      }
    }
    if (best_f < 0) return idx;

    std::vector<std::size_t> lrows, rrows;
    for (std::size_t r : rows)
      (x[r][best_f] <= best_t ? lrows : rrows).push_back(r);
    if (lrows.empty() || rrows.empty()) return idx;
    nodes_[idx].feature = best_f;
    nodes_[idx].threshold = best_t;
    int l = build(x, y, lrows, depth + 1, max_depth, gen);
    int r = build(x, y, rrows, depth + 1, max_depth, gen);
    nodes_[idx].left = l;
    nodes_[idx].right = r;
    return idx;
  }

  std::vector<tree_node> nodes_;
};

class forest_model : public trained_model {
 public:
  forest_model(labelled_points pts, int trees, int max_depth,
               std::uint64_t seed, std::string pos, std::string neg)
      : trained_model(std::move(pts.ft), std::move(pos), std::move(neg)) {
    trees_.resize(std::max(trees, 1));
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      rng gen(derive_seed(seed, t));
      std::vector<std::size_t> rows(pts.x.size());
      for (auto& r : rows)
        r = static_cast<std::size_t>(gen.below(pts.x.size()));
      std::sort(rows.begin(), rows.end());
      trees_[t].fit(pts.x, pts.y, rows, max_depth, gen);
    }
  }

  proba predict_proba(const instance& inst) const override {
    std::vector<double> q = ft_.apply(inst);
    long votes = 0;
    for (const auto& t : trees_) votes += t.predict(q);
    double p = static_cast<double>(votes) / static_cast<double>(trees_.size());
    return {p, 1.0 - p};
  }

 private:
  std::vector<decision_tree> trees_;
};

// ---- MLP ---------------------------------------------------------------

class mlp_model : public trained_model {
 public:
  mlp_model(labelled_points pts, const classifier_kind& kind,
            std::uint64_t seed, std::string pos, std::string neg)
      : trained_model(std::move(pts.ft), std::move(pos), std::move(neg)) {
    std::vector<int> sizes;
    sizes.push_back(static_cast<int>(ft_.dim()));
    for (int h : kind.hidden) sizes.push_back(h);
    sizes.push_back(1);
    rng gen(seed);
    net_.init(sizes, gen);
    std::vector<std::vector<double>> gw;
    std::vector<std::vector<double>> gb;
    for (int e = 0; e < kind.epochs; ++e) {
      net_.gradient(pts.x, pts.y, gw, gb);
      net_.step(gw, gb, kind.learning_rate);
    }
  }

  proba predict_proba(const instance& inst) const override {
    double p = net_.forward(ft_.apply(inst));
    return {p, 1.0 - p};
  }

 private:
  mlp_net net_;
};

// ---- linear SVM ----------------------------------------------------------

class svm_model : public trained_model {
 public:
  svm_model(labelled_points pts, const classifier_kind& kind,
            std::string pos, std::string neg)
      : trained_model(std::move(pts.ft), std::move(pos), std::move(neg)),
        w_(ft_.dim(), 0.0) {
    // full-batch Pegasos: hinge subgradient with 1/(lambda t) steps and
    // projection onto the 1/sqrt(lambda) ball
    double lambda = kind.regularization;
    std::size_t n = pts.x.size();
    for (int t = 1; t <= kind.epochs; ++t) {
      double eta = 1.0 / (lambda * static_cast<double>(t));
      std::vector<double> gw(w_.size(), 0.0);
      double gb = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double yi = pts.y[i] ? 1.0 : -1.0;
        double margin = yi * (dot(w_, pts.x[i]) + b_);
        if (margin < 1.0) {
          for (std::size_t j = 0; j < w_.size(); ++j)
            gw[j] -= yi * pts.x[i][j];
          gb -= yi;
        }
      }
      double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t j = 0; j < w_.size(); ++j)
        w_[j] -= eta * (lambda * w_[j] + gw[j] * inv_n);
      b_ -= eta * gb * inv_n;
      double norm = std::sqrt(dot(w_, w_));
      double cap = 1.0 / std::sqrt(lambda);
      if (norm > cap) {
        double s = cap / norm;
        for (auto& wj : w_) wj *= s;
      }
    }
  }

  proba predict_proba(const instance& inst) const override {
    double margin = dot(w_, ft_.apply(inst)) + b_;
    double p = logistic(margin);  // fixed slope 1, offset 0
    return {p, 1.0 - p};
  }

 private:
  static double dot(const std::vector<double>& a,
                    const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
  std::vector<double> w_;
  double b_ = 0.0;
};

}  // namespace

void mlp_net::init(const std::vector<int>& layer_sizes, rng& gen) {
  sizes = layer_sizes;
  weights.clear();
  biases.clear();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    int fan_in = sizes[l];
    int fan_out = sizes[l + 1];
    double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::vector<double> w(static_cast<std::size_t>(fan_in) * fan_out);
    for (auto& v : w) v = (gen.unit() * 2.0 - 1.0) * r;
    weights.push_back(std::move(w));
    biases.push_back(std::vector<double>(fan_out, 0.0));
  }
}

double mlp_net::forward(const std::vector<double>& x) const {
  std::vector<double> a = x;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    int fan_in = sizes[l];
    int fan_out = sizes[l + 1];
    std::vector<double> z(fan_out);
    for (int j = 0; j < fan_out; ++j) {
      double s = biases[l][j];
      for (int i = 0; i < fan_in; ++i)
        s += weights[l][static_cast<std::size_t>(j) * fan_in + i] * a[i];
      z[j] = logistic(s);
    }
    a = std::move(z);
  }
  return a[0];
}

double mlp_net::loss(const std::vector<std::vector<double>>& xs,
                     const std::vector<int>& ys) const {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double p = std::clamp(forward(xs[i]), 1e-12, 1.0 - 1e-12);
    total += ys[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(xs.size());
}

void mlp_net::gradient(const std::vector<std::vector<double>>& xs,
                       const std::vector<int>& ys,
                       std::vector<std::vector<double>>& gw,
                       std::vector<std::vector<double>>& gb) const {
  gw.assign(weights.size(), {});
  gb.assign(biases.size(), {});
  for (std::size_t l = 0; l < weights.size(); ++l) {
    gw[l].assign(weights[l].size(), 0.0);
    gb[l].assign(biases[l].size(), 0.0);
  }
  std::size_t layers = weights.size();
  for (std::size_t s = 0; s < xs.size(); ++s) {
    // forward, keeping activations
    std::vector<std::vector<double>> act(layers + 1);
    act[0] = xs[s];
    for (std::size_t l = 0; l < layers; ++l) {
      int fan_in = sizes[l];
      int fan_out = sizes[l + 1];
      act[l + 1].resize(fan_out);
      for (int j = 0; j < fan_out; ++j) {
        double z = biases[l][j];
        for (int i = 0; i < fan_in; ++i)
          z += weights[l][static_cast<std::size_t>(j) * fan_in + i] *
               act[l][i];
        act[l + 1][j] = logistic(z);
      }
    }
    // output delta of BCE + sigmoid is (p - y)
    std::vector<double> delta{act[layers][0] -
                              static_cast<double>(ys[s])};
    for (std::size_t l = layers; l-- > 0;) {
      int fan_in = sizes[l];
      int fan_out = sizes[l + 1];
      for (int j = 0; j < fan_out; ++j) {
        gb[l][j] += delta[j];
        for (int i = 0; i < fan_in; ++i)
          gw[l][static_cast<std::size_t>(j) * fan_in + i] +=
              delta[j] * act[l][i];
      }
      if (l == 0) break;
      std::vector<double> prev(fan_in, 0.0);
      for (int i = 0; i < fan_in; ++i) {
        double s2 = 0.0;
        for (int j = 0; j < fan_out; ++j)
          s2 += weights[l][static_cast<std::size_t>(j) * fan_in + i] *
                delta[j];
        double a = act[l][i];
        prev[i] = s2 * a * (1.0 - a);
      }
      delta = std::move(prev);
    }
  }
  double inv_n = 1.0 / static_cast<double>(xs.size());
  for (std::size_t l = 0; l < layers; ++l) {
    for (auto& g : gw[l]) g *= inv_n;
    for (auto& g : gb[l]) g *= inv_n;
  }
}

void mlp_net::step(const std::vector<std::vector<double>>& gw,
                   const std::vector<std::vector<double>>& gb, double lr) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i)
      weights[l][i] -= lr * gw[l][i];
    for (std::size_t i = 0; i < biases[l].size(); ++i)
      biases[l][i] -= lr * gb[l][i];
  }
}

std::unique_ptr<trained_model> fit(const classifier_kind& kind,
                                   const dataset& train, std::uint64_t seed) {
  labelled_points pts = prepare(train);
  std::string pos = train.positive_class();
  std::string neg = train.negative_class();
  switch (kind.fam) {
    case classifier_kind::family::knn:
      return std::make_unique<knn_model>(std::move(pts), kind.k,
                                         std::move(pos), std::move(neg));
    case classifier_kind::family::random_forest:
      return std::make_unique<forest_model>(std::move(pts), kind.trees,
                                            kind.max_depth, seed,
                                            std::move(pos), std::move(neg));
    case classifier_kind::family::mlp:
      return std::make_unique<mlp_model>(std::move(pts), kind, seed,
                                         std::move(pos), std::move(neg));
    case classifier_kind::family::linear_svm:
      return std::make_unique<svm_model>(std::move(pts), kind, std::move(pos),
                                         std::move(neg));
  }
  throw contract_error("unknown classifier kind");
}

}  // namespace rulegate

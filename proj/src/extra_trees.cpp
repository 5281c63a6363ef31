#include "meshgrade/extra_trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meshgrade/error.hpp"
#include "meshgrade/random.hpp"

namespace meshgrade {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double gini(double rework, double total) {
  const double p = rework / total;
  const double q = 1.0 - p;
  return 1.0 - p * p - q * q;
}

struct Job {
  int node;
  int begin;
  int end;
};

Tree grow_tree(const RowMajorMatrix& x, const std::vector<int>& labels,
               int attributes_per_split, int min_samples_split, Rng& rng) {
  const int n = static_cast<int>(x.rows());
  const int dimension = static_cast<int>(x.cols());

  std::vector<int> indices(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) indices[static_cast<std::size_t>(i)] = i;

  Tree tree;
  tree.nodes.emplace_back();
  std::vector<Job> jobs{{0, 0, n}};

  std::vector<double> low(static_cast<std::size_t>(dimension));
  std::vector<double> high(static_cast<std::size_t>(dimension));
  std::vector<int> candidates;
  std::vector<int> scratch;

  while (!jobs.empty()) {
    const Job job = jobs.back();
    jobs.pop_back();
    const int size = job.end - job.begin;

    int rework = 0;
    for (int i = job.begin; i < job.end; ++i) {
      rework += labels[static_cast<std::size_t>(
          indices[static_cast<std::size_t>(i)])];
    }

    auto make_leaf = [&]() {
      TreeNode& leaf = tree.nodes[static_cast<std::size_t>(job.node)];
      leaf.attribute = -1;
      leaf.rework = rework;
      leaf.passed = size - rework;
    };

    if (size < min_samples_split || rework == 0 || rework == size) {
      make_leaf();
      continue;
    }

    std::fill(low.begin(), low.end(),
              std::numeric_limits<double>::infinity());
    std::fill(high.begin(), high.end(),
              -std::numeric_limits<double>::infinity());
    for (int i = job.begin; i < job.end; ++i) {
      const double* row =
          x.data() + static_cast<std::ptrdiff_t>(
                         indices[static_cast<std::size_t>(i)]) *
                         dimension;
      for (int a = 0; a < dimension; ++a) {
        const double value = row[a];
        low[static_cast<std::size_t>(a)] =
            std::min(low[static_cast<std::size_t>(a)], value);
        high[static_cast<std::size_t>(a)] =
            std::max(high[static_cast<std::size_t>(a)], value);
      }
    }

    candidates.clear();
    for (int a = 0; a < dimension; ++a) {
      if (high[static_cast<std::size_t>(a)] >
          low[static_cast<std::size_t>(a)]) {
        candidates.push_back(a);
      }
    }
    if (candidates.empty()) {
      make_leaf();
      continue;
    }

    const int draw_count =
        std::min(attributes_per_split, static_cast<int>(candidates.size()));
    for (int i = 0; i < draw_count; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          uniform_index(rng, candidates.size() - static_cast<std::size_t>(i));
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[j]);
    }

    const double parent_gini = gini(rework, size);
    double best_reduction = -std::numeric_limits<double>::infinity();
    int best_attribute = -1;
    double best_cut = 0.0;

    for (int c = 0; c < draw_count; ++c) {
      const int attribute = candidates[static_cast<std::size_t>(c)];
      const double lo = low[static_cast<std::size_t>(attribute)];
      const double hi = high[static_cast<std::size_t>(attribute)];
      const double cut = lo + uniform_unit(rng) * (hi - lo);

      int left = 0;
      int left_rework = 0;
      for (int i = job.begin; i < job.end; ++i) {
        const int row = indices[static_cast<std::size_t>(i)];
        if (x(row, attribute) < cut) {
          ++left;
          left_rework += labels[static_cast<std::size_t>(row)];
        }
      }
      if (left == 0 || left == size) continue;  // cut landed on the min

      const int right = size - left;
      const int right_rework = rework - left_rework;
      const double reduction =
          parent_gini -
          (static_cast<double>(left) / size) * gini(left_rework, left) -
          (static_cast<double>(right) / size) * gini(right_rework, right);
      if (reduction > best_reduction) {
        best_reduction = reduction;
        best_attribute = attribute;
        best_cut = cut;
      }
    }

    if (best_attribute < 0) {
      make_leaf();
      continue;
    }

    scratch.clear();
    for (int i = job.begin; i < job.end; ++i) {
      const int row = indices[static_cast<std::size_t>(i)];
      if (x(row, best_attribute) < best_cut) scratch.push_back(row);
    }
    const int left_size = static_cast<int>(scratch.size());
    for (int i = job.begin; i < job.end; ++i) {
      const int row = indices[static_cast<std::size_t>(i)];
      if (!(x(row, best_attribute) < best_cut)) scratch.push_back(row);
    }
    std::copy(scratch.begin(), scratch.end(),
              indices.begin() + job.begin);

    const int left_node = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int right_node = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(job.node)];
    parent.attribute = best_attribute;
    parent.cut = best_cut;
    parent.left = left_node;
    parent.right = right_node;

    jobs.push_back({right_node, job.begin + left_size, job.end});
    jobs.push_back({left_node, job.begin, job.begin + left_size});
  }

  return tree;
}

}  // namespace

ExtraTreesModel train_extra_trees(const Dataset& data,
                                  const TrainConfig& config) {
  validate(config);
  if (data.size() == 0) throw ModelError("cannot train on an empty dataset");
  const int dimension = static_cast<int>(data.x.cols());
  if (data.labels.size() != data.size()) {
    throw ModelError("label count does not match row count");
  }

  ExtraTreesModel model;
  model.dimension = dimension;
  model.attributes_per_split =
      config.attributes_per_split > 0
          ? std::min(config.attributes_per_split, dimension)
          : std::max(1, static_cast<int>(std::lround(
                            std::sqrt(static_cast<double>(dimension)))));
  model.min_samples_split = config.min_samples_split;
  model.seed = config.seed;

  const RowMajorMatrix x = data.x;
  model.trees.reserve(static_cast<std::size_t>(config.tree_count));
  for (int t = 0; t < config.tree_count; ++t) {
    Rng rng(config.seed + static_cast<std::uint64_t>(t));
    model.trees.push_back(grow_tree(x, data.labels, model.attributes_per_split,
                                    model.min_samples_split, rng));
  }
  return model;
}

double tree_rework_fraction(const Tree& tree, const Eigen::VectorXd& x) {
  const TreeNode* node = &tree.nodes[0];
  while (!node->is_leaf()) {
    node = &tree.nodes[static_cast<std::size_t>(
        x[node->attribute] < node->cut ? node->left : node->right)];
  }
  return static_cast<double>(node->rework) /
         static_cast<double>(node->rework + node->passed);
}

double predict_proba(const ExtraTreesModel& model, const Eigen::VectorXd& x) {
  if (static_cast<int>(x.size()) != model.dimension) {
    throw ModelError("feature vector length " + std::to_string(x.size()) +
                     " does not match model dimension " +
                     std::to_string(model.dimension));
  }
  double sum = 0.0;
  for (const Tree& tree : model.trees) {
    sum += tree_rework_fraction(tree, x);
  }
  return sum / static_cast<double>(model.trees.size());
}

Eigen::VectorXd predict_proba(const ExtraTreesModel& model,
                              const Eigen::MatrixXd& x) {
  Eigen::VectorXd probabilities(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    probabilities[i] = predict_proba(model, Eigen::VectorXd(x.row(i)));
  }
  return probabilities;
}

}  // namespace meshgrade

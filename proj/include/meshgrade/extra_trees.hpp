#ifndef MESHGRADE_EXTRA_TREES_HPP
#define MESHGRADE_EXTRA_TREES_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "meshgrade/features.hpp"
#include "meshgrade/train_config.hpp"

namespace meshgrade {

// attribute < 0 marks a leaf; only leaves carry class counts.
struct TreeNode {
  int attribute = -1;
  double cut = 0.0;
  int left = -1;
  int right = -1;
  int rework = 0;
  int passed = 0;

  bool is_leaf() const { return attribute < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at index 0
};

struct ExtraTreesModel {
  int dimension = 0;
  int attributes_per_split = 0;
  int min_samples_split = 2;
  std::uint64_t seed = 0;
  std::vector<Tree> trees;
};

// Every tree sees the full dataset (no bootstrap); splits draw
// attributes-per-split candidates from the node's non-constant attributes
// and one uniform cut-point each, then keep the best Gini reduction.
// Tree t's random stream is seeded with seed + t.
ExtraTreesModel train_extra_trees(const Dataset& data,
                                  const TrainConfig& config);

// Rework fraction of the leaf reached by x.
double tree_rework_fraction(const Tree& tree, const Eigen::VectorXd& x);

// Mean of the per-tree leaf fractions.
double predict_proba(const ExtraTreesModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd predict_proba(const ExtraTreesModel& model,
                              const Eigen::MatrixXd& x);

}  // namespace meshgrade

#endif

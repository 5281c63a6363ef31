#ifndef MESHGRADE_EVAL_HPP
#define MESHGRADE_EVAL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "meshgrade/features.hpp"
#include "meshgrade/train_config.hpp"

namespace meshgrade {

struct FoldAssignment {
  std::map<std::string, int> fold_of;  // mesh id -> fold index
  int fold_count = 0;
  std::uint64_t seed = 0;
};

// Seeded uniform shuffle of the sorted mesh ids, then round-robin, so fold
// sizes differ by at most one.
FoldAssignment assign_folds(std::vector<std::string> mesh_ids, int fold_count,
                            std::uint64_t seed);

struct PredictionRecord {
  std::string mesh_id;
  int element_id = 0;
  double probability = 0.0;
  int ground_truth = 0;  // 1 = rework
};

struct CrossvalResult {
  std::vector<PredictionRecord> records;  // ordered (mesh id, element id)
  FoldAssignment folds;
};

// Mesh-grouped crossvalidation: each element is predicted exactly once by
// a model trained without any element of its mesh. Fold f trains with seed
// derive_seed(seed, f); features are computed once per mesh.
CrossvalResult run_crossval(const std::vector<LabelledMesh>& meshes,
                            const FeatureConfig& features,
                            const TrainConfig& train, int fold_count,
                            std::uint64_t seed);

struct ConfusionMatrix {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }
};

// Rework is the positive class; prediction is probability >= threshold.
ConfusionMatrix confusion_from_predictions(
    const std::vector<PredictionRecord>& records, double threshold);

struct ClassificationMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  bool precision_defined = true;  // false when no positive prediction
  bool recall_defined = true;     // false when no positive ground truth
};

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm);

// Per-fold metrics averaged with equal fold weight; the pooled variant
// above is the reported default.
ClassificationMetrics fold_averaged_metrics(const CrossvalResult& result,
                                            double threshold);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_defined = true;
};

using PrCurve = std::vector<PrPoint>;

// count evenly spaced thresholds spanning [0, 1].
std::vector<double> uniform_thresholds(int count = 101);

PrCurve pr_curve(const std::vector<PredictionRecord>& records,
                 std::vector<double> thresholds);

// "threshold,precision,recall" rows.
std::string pr_curve_csv(const PrCurve& curve);

// "mesh_id,element_id,probability,ground_truth" rows.
std::string prediction_dump_csv(const std::vector<PredictionRecord>& records);

// Share table (two-decimal percentages) plus metrics per threshold, with
// the run configuration echoed; byte-stable for identical inputs.
std::string crossval_report(const CrossvalResult& result,
                            const FeatureConfig& features,
                            const TrainConfig& train,
                            const std::vector<double>& thresholds = {
                                0.25, 0.5, 0.75});

}  // namespace meshgrade

#endif

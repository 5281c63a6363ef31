#include "meshgrade/eval.hpp"

#include <algorithm>
#include <sstream>

#include "meshgrade/error.hpp"
#include "meshgrade/extra_trees.hpp"
#include "meshgrade/fnn.hpp"
#include "meshgrade/format.hpp"
#include "meshgrade/random.hpp"

namespace meshgrade {

FoldAssignment assign_folds(std::vector<std::string> mesh_ids, int fold_count,
                            std::uint64_t seed) {
  if (fold_count < 1) throw ConfigError("fold count must be positive");
  if (static_cast<std::size_t>(fold_count) > mesh_ids.size()) {
    throw ConfigError("fold count " + std::to_string(fold_count) +
                      " exceeds mesh count " +
                      std::to_string(mesh_ids.size()));
  }
  std::sort(mesh_ids.begin(), mesh_ids.end());
  if (std::adjacent_find(mesh_ids.begin(), mesh_ids.end()) !=
      mesh_ids.end()) {
    throw ConfigError("duplicate mesh id in fold assignment");
  }

  Rng rng(seed);
  shuffle_in_place(mesh_ids, rng);

  FoldAssignment assignment;
  assignment.fold_count = fold_count;
  assignment.seed = seed;
  for (std::size_t i = 0; i < mesh_ids.size(); ++i) {
    assignment.fold_of[mesh_ids[i]] = static_cast<int>(i) % fold_count;
  }
  return assignment;
}

CrossvalResult run_crossval(const std::vector<LabelledMesh>& meshes,
                            const FeatureConfig& features,
                            const TrainConfig& train, int fold_count,
                            std::uint64_t seed) {
  if (fold_count < 2) {
    throw ConfigError("crossvalidation needs at least 2 folds");
  }
  validate(train);

  const Dataset data = build_dataset(meshes, features);

  std::vector<std::string> ids;
  ids.reserve(meshes.size());
  for (const LabelledMesh& mesh : meshes) ids.push_back(mesh.id);

  CrossvalResult result;
  result.folds = assign_folds(std::move(ids), fold_count, seed);

  const Eigen::Index rows = static_cast<Eigen::Index>(data.size());
  std::vector<int> row_fold(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    row_fold[i] = result.folds.fold_of.at(data.mesh_ids[i]);
  }

  result.records.resize(data.size());
  const Eigen::Index dimension = data.x.cols();

  for (int fold = 0; fold < fold_count; ++fold) {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    for (Eigen::Index i = 0; i < rows; ++i) {
      (row_fold[static_cast<std::size_t>(i)] == fold ? test_rows : train_rows)
          .push_back(i);
    }
    if (test_rows.empty()) continue;
    if (train_rows.empty()) {
      throw ModelError("fold " + std::to_string(fold) +
                       " leaves no training data");
    }

    Dataset subset;
    subset.x.resize(static_cast<Eigen::Index>(train_rows.size()), dimension);
    subset.mesh_ids.reserve(train_rows.size());
    subset.element_ids.reserve(train_rows.size());
    subset.labels.reserve(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      const Eigen::Index row = train_rows[i];
      subset.x.row(static_cast<Eigen::Index>(i)) = data.x.row(row);
      subset.mesh_ids.push_back(data.mesh_ids[static_cast<std::size_t>(row)]);
      subset.element_ids.push_back(
          data.element_ids[static_cast<std::size_t>(row)]);
      subset.labels.push_back(data.labels[static_cast<std::size_t>(row)]);
    }

    TrainConfig fold_config = train;
    fold_config.seed = derive_seed(seed, static_cast<std::uint64_t>(fold));

    Eigen::MatrixXd x_test(static_cast<Eigen::Index>(test_rows.size()),
                           dimension);
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      x_test.row(static_cast<Eigen::Index>(i)) = data.x.row(test_rows[i]);
    }

    Eigen::VectorXd probabilities;
    if (train.kind == ModelKind::extra_trees) {
      const ExtraTreesModel model = train_extra_trees(subset, fold_config);
      probabilities = predict_proba(model, x_test);
    } else {
      const FnnModel model = train_fnn(subset, fold_config);
      probabilities = fnn_predict_proba(model, x_test);
    }

    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      const std::size_t row = static_cast<std::size_t>(test_rows[i]);
      result.records[row] = {data.mesh_ids[row], data.element_ids[row],
                             probabilities[static_cast<Eigen::Index>(i)],
                             data.labels[row]};
    }
  }

  return result;
}

ConfusionMatrix confusion_from_predictions(
    const std::vector<PredictionRecord>& records, double threshold) {
  if (records.empty()) {
    throw Error("cannot build a confusion matrix from no records");
  }
  ConfusionMatrix cm;
  for (const PredictionRecord& record : records) {
    const bool predicted = record.probability >= threshold;
    if (record.ground_truth == 1) {
      (predicted ? cm.tp : cm.fn) += 1;
    } else {
      (predicted ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw Error("empty confusion matrix");
  ClassificationMetrics metrics;
  const long positive_predictions = cm.tp + cm.fp;
  const long positive_truth = cm.tp + cm.fn;
  metrics.precision_defined = positive_predictions > 0;
  metrics.recall_defined = positive_truth > 0;
  metrics.precision =
      metrics.precision_defined
          ? static_cast<double>(cm.tp) /
                static_cast<double>(positive_predictions)
          : 0.0;
  metrics.recall = metrics.recall_defined
                       ? static_cast<double>(cm.tp) /
                             static_cast<double>(positive_truth)
                       : 0.0;
  metrics.accuracy = static_cast<double>(cm.tp + cm.tn) /
                     static_cast<double>(cm.total());
  const double sum = metrics.precision + metrics.recall;
  metrics.f1 = sum > 0.0 ? 2.0 * metrics.precision * metrics.recall / sum
                         : 0.0;
  return metrics;
}

ClassificationMetrics fold_averaged_metrics(const CrossvalResult& result,
                                            double threshold) {
  std::vector<std::vector<PredictionRecord>> per_fold(
      static_cast<std::size_t>(result.folds.fold_count));
  for (const PredictionRecord& record : result.records) {
    per_fold[static_cast<std::size_t>(
                 result.folds.fold_of.at(record.mesh_id))]
        .push_back(record);
  }

  ClassificationMetrics mean;
  mean.precision = mean.recall = mean.accuracy = mean.f1 = 0.0;
  int counted = 0;
  for (const auto& records : per_fold) {
    if (records.empty()) continue;
    const ClassificationMetrics fold_metrics =
        classification_metrics(confusion_from_predictions(records, threshold));
    mean.precision += fold_metrics.precision;
    mean.recall += fold_metrics.recall;
    mean.accuracy += fold_metrics.accuracy;
    mean.f1 += fold_metrics.f1;
    mean.precision_defined =
        mean.precision_defined && fold_metrics.precision_defined;
    mean.recall_defined = mean.recall_defined && fold_metrics.recall_defined;
    ++counted;
  }
  if (counted == 0) throw Error("no folds to average");
  mean.precision /= counted;
  mean.recall /= counted;
  mean.accuracy /= counted;
  mean.f1 /= counted;
  return mean;
}

std::vector<double> uniform_thresholds(int count) {
  if (count < 2) throw ConfigError("threshold grid needs at least 2 points");
  std::vector<double> thresholds(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    thresholds[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return thresholds;
}

PrCurve pr_curve(const std::vector<PredictionRecord>& records,
                 std::vector<double> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  PrCurve curve;
  curve.reserve(thresholds.size());
  for (double threshold : thresholds) {
    const ClassificationMetrics metrics =
        classification_metrics(confusion_from_predictions(records, threshold));
    curve.push_back({threshold, metrics.precision, metrics.recall,
                     metrics.precision_defined});
  }
  return curve;
}

std::string pr_curve_csv(const PrCurve& curve) {
  std::ostringstream out;
  out << "threshold,precision,recall\n";
  for (const PrPoint& point : curve) {
    out << format_double(point.threshold) << ','
        << format_double(point.precision) << ','
        << format_double(point.recall) << '\n';
  }
  return out.str();
}

std::string prediction_dump_csv(
    const std::vector<PredictionRecord>& records) {
  std::ostringstream out;
  out << "mesh_id,element_id,probability,ground_truth\n";
  for (const PredictionRecord& record : records) {
    out << record.mesh_id << ',' << record.element_id << ','
        << format_double(record.probability) << ','
        << (record.ground_truth == 1 ? "rework" : "passed") << '\n';
  }
  return out.str();
}

std::string crossval_report(const CrossvalResult& result,
                            const FeatureConfig& features,
                            const TrainConfig& train,
                            const std::vector<double>& thresholds) {
  long positives = 0;
  for (const PredictionRecord& record : result.records) {
    positives += record.ground_truth;
  }
  const double total = static_cast<double>(result.records.size());

  std::ostringstream out;
  out << "crossval report\n";
  out << "model: " << to_string(train.kind) << '\n';
  if (train.kind == ModelKind::extra_trees) {
    out << "trees: " << train.tree_count << '\n';
    out << "attributes_per_split: "
        << (train.attributes_per_split > 0
                ? std::to_string(train.attributes_per_split)
                : std::string("auto"))
        << '\n';
    out << "min_samples_split: " << train.min_samples_split << '\n';
  } else {
    out << "hidden_sizes:";
    for (int size : train.hidden_sizes) out << ' ' << size;
    out << '\n';
    out << "learning_rate: " << format_double(train.learning_rate) << '\n';
    out << "batch_size: " << train.batch_size << '\n';
    out << "max_epochs: " << train.max_epochs << '\n';
    out << "patience: " << train.patience << '\n';
    out << "validation_fraction: " << format_double(train.validation_fraction)
        << '\n';
  }
  out << "folds: " << result.folds.fold_count << '\n';
  out << "seed: " << result.folds.seed << '\n';
  out << "ring_limit: " << features.ring_limit << '\n';
  out << "feature_dimension: " << feature_dimension(features) << '\n';
  out << "meshes: " << result.folds.fold_of.size() << '\n';
  out << "elements: " << result.records.size() << '\n';
  out << "rework_share: "
      << format_fixed(100.0 * static_cast<double>(positives) / total, 2)
      << "%\n";
  out << '\n';
  out << "th,tp_pct,tn_pct,fp_pct,fn_pct,precision,recall,accuracy,f1\n";
  for (double threshold : thresholds) {
    const ConfusionMatrix cm =
        confusion_from_predictions(result.records, threshold);
    const ClassificationMetrics metrics = classification_metrics(cm);
    out << format_fixed(threshold, 2) << ','
        << format_fixed(100.0 * static_cast<double>(cm.tp) / total, 2) << ','
        << format_fixed(100.0 * static_cast<double>(cm.tn) / total, 2) << ','
        << format_fixed(100.0 * static_cast<double>(cm.fp) / total, 2) << ','
        << format_fixed(100.0 * static_cast<double>(cm.fn) / total, 2) << ','
        << format_fixed(metrics.precision, 4) << ','
        << format_fixed(metrics.recall, 4) << ','
        << format_fixed(metrics.accuracy, 4) << ','
        << format_fixed(metrics.f1, 4) << '\n';
  }
  return out.str();
}

}  // namespace meshgrade

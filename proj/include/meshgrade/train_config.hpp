#ifndef MESHGRADE_TRAIN_CONFIG_HPP
#define MESHGRADE_TRAIN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "meshgrade/error.hpp"

namespace meshgrade {

enum class ModelKind { extra_trees, fnn };

inline const char* to_string(ModelKind kind) {
  return kind == ModelKind::fnn ? "fnn" : "extratrees";
}

inline ModelKind model_kind_from_string(const std::string& text) {
  if (text == "extratrees") return ModelKind::extra_trees;
  if (text == "fnn") return ModelKind::fnn;
  throw ConfigError("unknown model kind \"" + text + "\"");
}

struct TrainConfig {
  ModelKind kind = ModelKind::extra_trees;
  std::uint64_t seed = 0;

  // ensemble
  int tree_count = 100;
  int attributes_per_split = 0;  // 0 = round(sqrt(dimension))
  int min_samples_split = 2;

  // network
  std::vector<int> hidden_sizes{64, 128, 16};
  double learning_rate = 0.01;
  int batch_size = 256;
  int max_epochs = 50;
  int patience = 5;
  double validation_fraction = 0.1;
};

inline void validate(const TrainConfig& config) {
  if (config.tree_count < 1) throw ConfigError("tree count must be positive");
  if (config.attributes_per_split < 0) {
    throw ConfigError("attributes per split must be non-negative");
  }
  if (config.min_samples_split < 2) {
    throw ConfigError("min samples to split must be at least 2");
  }
  if (config.hidden_sizes.empty()) {
    throw ConfigError("need at least one hidden layer");
  }
  for (int size : config.hidden_sizes) {
    if (size < 1) throw ConfigError("hidden layer sizes must be positive");
  }
  if (!(config.learning_rate > 0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (config.batch_size < 1) throw ConfigError("batch size must be positive");
  if (config.max_epochs < 1) throw ConfigError("max epochs must be positive");
  if (config.patience < 1) throw ConfigError("patience must be positive");
  if (config.validation_fraction < 0 || config.validation_fraction > 0.5) {
    throw ConfigError("validation fraction must lie in [0, 0.5]");
  }
}

}  // namespace meshgrade

#endif

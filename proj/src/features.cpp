#include "meshgrade/features.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "meshgrade/error.hpp"
#include "meshgrade/format.hpp"

namespace meshgrade {

const char* to_string(Aggregator aggregator) {
  switch (aggregator) {
    case Aggregator::min: return "min";
    case Aggregator::max: return "max";
    case Aggregator::mean: return "mean";
  }
  return "?";
}

Aggregator aggregator_from_string(const std::string& text) {
  for (Aggregator aggregator : kAllAggregators) {
    if (text == to_string(aggregator)) return aggregator;
  }
  throw ConfigError("unknown aggregator \"" + text + "\"");
}

double aggregate(const std::vector<double>& values, Aggregator aggregator) {
  if (values.empty()) return 0.0;
  switch (aggregator) {
    case Aggregator::min:
      return *std::min_element(values.begin(), values.end());
    case Aggregator::max:
      return *std::max_element(values.begin(), values.end());
    case Aggregator::mean: {
      double sum = 0.0;
      for (double value : values) sum += value;
      return sum / static_cast<double>(values.size());
    }
  }
  return 0.0;
}

namespace {

void check_config(const FeatureConfig& config) {
  if (config.ring_limit < 0) {
    throw ConfigError("ring limit must be non-negative");
  }
  if (config.properties.empty() || config.aggregators.empty()) {
    throw ConfigError("need at least one property and one aggregator");
  }
}

// Writes one element's flat feature row. Frontier members arrive as table
// row indices, which requires table rows and graph vertices to share the
// ascending-id order.
void fill_row(const PropertyTable& table, const FrontierWorkspace& ws,
              const FeatureConfig& config, double* out) {
  const auto& values = table.values();
  double* cursor = out;
  for (int k = 0; k <= config.ring_limit; ++k) {
    const auto& level = ws.levels[static_cast<std::size_t>(k)];
    for (Property property : config.properties) {
      const int column = static_cast<int>(property);
      double low = std::numeric_limits<double>::infinity();
      double high = -std::numeric_limits<double>::infinity();
      double sum = 0.0;
      for (int row : level) {
        const double value = values(row, column);
        low = std::min(low, value);
        high = std::max(high, value);
        sum += value;
      }
      const bool empty = level.empty();
      const double mean =
          empty ? 0.0 : sum / static_cast<double>(level.size());
      for (Aggregator aggregator : config.aggregators) {
        double result = 0.0;
        if (!empty) {
          switch (aggregator) {
            case Aggregator::min: result = low; break;
            case Aggregator::max: result = high; break;
            case Aggregator::mean: result = mean; break;
          }
        }
        *cursor++ = result;
        if (k == 0 && config.skip_k0_duplicates) break;
      }
    }
  }
}

}  // namespace

int feature_dimension(const FeatureConfig& config) {
  check_config(config);
  const int m = static_cast<int>(config.properties.size());
  const int n = static_cast<int>(config.aggregators.size());
  if (config.skip_k0_duplicates) return m + config.ring_limit * m * n;
  return (config.ring_limit + 1) * m * n;
}

FeatureTensor feature_tensor(int element_id, const PropertyTable& table,
                             const NeighbourhoodGraph& graph,
                             const FeatureConfig& config) {
  check_config(config);
  if (graph.vertex_ids() != table.element_ids()) {
    throw Error("graph and property table cover different elements");
  }

  FrontierWorkspace ws;
  graph.frontiers_into(graph.index_of(element_id), config.ring_limit, ws);

  FeatureTensor tensor;
  tensor.ring_limit = config.ring_limit;
  tensor.properties = config.properties;
  tensor.aggregators = config.aggregators;
  const int m = static_cast<int>(config.properties.size());
  const int n = static_cast<int>(config.aggregators.size());
  tensor.values.resize(
      static_cast<std::size_t>((config.ring_limit + 1) * m * n));

  FeatureConfig full = config;
  full.skip_k0_duplicates = false;  // tensor always carries the full block
  fill_row(table, ws, full, tensor.values.data());
  return tensor;
}

Eigen::VectorXd flatten(const FeatureTensor& tensor,
                        bool skip_k0_duplicates) {
  const int m = static_cast<int>(tensor.properties.size());
  const int n = static_cast<int>(tensor.aggregators.size());
  const int length = skip_k0_duplicates ? m + tensor.ring_limit * m * n
                                        : (tensor.ring_limit + 1) * m * n;
  Eigen::VectorXd flat(length);
  int cursor = 0;
  for (int k = 0; k <= tensor.ring_limit; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        flat[cursor++] = tensor.at(k, i, j);
        if (k == 0 && skip_k0_duplicates) break;
      }
    }
  }
  return flat;
}

MeshFeatures mesh_feature_matrix(const Mesh& mesh,
                                 const FeatureConfig& config) {
  check_config(config);
  const NeighbourhoodGraph graph = build_graph(mesh);
  const PropertyTable table = compute_property_table(mesh, graph);
  const int dimension = feature_dimension(config);

  MeshFeatures features;
  features.element_ids = graph.vertex_ids();
  features.x.resize(static_cast<Eigen::Index>(graph.vertex_count()),
                    dimension);

  FrontierWorkspace ws;
  std::vector<double> feature_row(static_cast<std::size_t>(dimension));
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    graph.frontiers_into(static_cast<int>(v), config.ring_limit, ws);
    fill_row(table, ws, config, feature_row.data());
    for (int j = 0; j < dimension; ++j) {
      features.x(static_cast<Eigen::Index>(v), j) =
          feature_row[static_cast<std::size_t>(j)];
    }
  }
  return features;
}

Dataset build_dataset(const std::vector<LabelledMesh>& meshes,
                      const FeatureConfig& config) {
  check_config(config);

  std::vector<const LabelledMesh*> ordered;
  ordered.reserve(meshes.size());
  for (const LabelledMesh& mesh : meshes) ordered.push_back(&mesh);
  std::sort(ordered.begin(), ordered.end(),
            [](const LabelledMesh* a, const LabelledMesh* b) {
              return a->id < b->id;
            });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i - 1]->id == ordered[i]->id) {
      throw Error("duplicate mesh id \"" + ordered[i]->id + "\"");
    }
  }

  std::size_t total = 0;
  for (const LabelledMesh* mesh : ordered) {
    total += mesh->mesh.elements().size();
  }

  const int dimension = feature_dimension(config);
  Dataset dataset;
  dataset.mesh_ids.reserve(total);
  dataset.element_ids.reserve(total);
  dataset.labels.reserve(total);
  dataset.x.resize(static_cast<Eigen::Index>(total), dimension);

  Eigen::Index row = 0;
  for (const LabelledMesh* labelled : ordered) {
    const ValidationReport label_report =
        validate_labels(labelled->mesh, labelled->labels, true);
    if (!label_report.empty()) {
      throw Error("mesh \"" + labelled->id +
                  "\": " + label_report.front().message);
    }

    const MeshFeatures features = mesh_feature_matrix(labelled->mesh, config);
    for (std::size_t v = 0; v < features.element_ids.size(); ++v) {
      const int element_id = features.element_ids[v];
      dataset.mesh_ids.push_back(labelled->id);
      dataset.element_ids.push_back(element_id);
      dataset.labels.push_back(
          labelled->labels.at(element_id) == Label::rework ? 1 : 0);
      dataset.x.row(row) = features.x.row(static_cast<Eigen::Index>(v));
      ++row;
    }
  }
  return dataset;
}

std::string feature_csv(const Dataset& dataset) {
  std::ostringstream out;
  out << "mesh_id,element_id";
  for (Eigen::Index j = 0; j < dataset.x.cols(); ++j) {
    out << ",f_" << j;
  }
  out << ",label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    out << dataset.mesh_ids[i] << ',' << dataset.element_ids[i];
    for (Eigen::Index j = 0; j < dataset.x.cols(); ++j) {
      out << ',' << format_double(dataset.x(row, j));
    }
    out << ',' << (dataset.labels[i] == 1 ? "rework" : "passed") << '\n';
  }
  return out.str();
}

}  // namespace meshgrade

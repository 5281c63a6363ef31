#ifndef MESHGRADE_FEATURES_HPP
#define MESHGRADE_FEATURES_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "meshgrade/graph.hpp"
#include "meshgrade/mesh.hpp"
#include "meshgrade/metrics.hpp"

namespace meshgrade {

enum class Aggregator : int { min = 0, max = 1, mean = 2 };

const char* to_string(Aggregator aggregator);
Aggregator aggregator_from_string(const std::string& text);

inline constexpr std::array<Aggregator, 3> kAllAggregators = {
    Aggregator::min, Aggregator::max, Aggregator::mean};

// Empty input yields the fill value 0 for every aggregator: rings exhaust
// on small meshes and 0 is the neutral no-signal value.
double aggregate(const std::vector<double>& values, Aggregator aggregator);

struct FeatureConfig {
  int ring_limit = 4;  // frontiers 0..ring_limit enter the tensor
  std::vector<Property> properties{kAllProperties.begin(),
                                   kAllProperties.end()};
  std::vector<Aggregator> aggregators{kAllAggregators.begin(),
                                      kAllAggregators.end()};
  // Emit the k=0 block once per property instead of once per aggregator
  // (its three aggregates coincide on the singleton frontier).
  bool skip_k0_duplicates = false;
};

// Flat feature-vector length under this configuration.
int feature_dimension(const FeatureConfig& config);

// Dense (ring_limit+1) x properties x aggregators block per element.
struct FeatureTensor {
  int ring_limit = 0;
  std::vector<Property> properties;
  std::vector<Aggregator> aggregators;
  std::vector<double> values;  // ring-major, then property, then aggregator

  double at(int k, int property_index, int aggregator_index) const {
    const int m = static_cast<int>(properties.size());
    const int n = static_cast<int>(aggregators.size());
    return values[static_cast<std::size_t>((k * m + property_index) * n +
                                           aggregator_index)];
  }
};

FeatureTensor feature_tensor(int element_id, const PropertyTable& table,
                             const NeighbourhoodGraph& graph,
                             const FeatureConfig& config);

// Ring-major, then property, then aggregator; with skip_k0_duplicates the
// k=0 block shrinks to one entry per property.
Eigen::VectorXd flatten(const FeatureTensor& tensor,
                        bool skip_k0_duplicates = false);

// Feature rows for every element of one mesh, label-free; rows follow
// ascending element id.
struct MeshFeatures {
  std::vector<int> element_ids;
  Eigen::MatrixXd x;
};

MeshFeatures mesh_feature_matrix(const Mesh& mesh,
                                 const FeatureConfig& config);

struct Dataset {
  std::vector<std::string> mesh_ids;  // one entry per row
  std::vector<int> element_ids;
  Eigen::MatrixXd x;        // rows x feature_dimension
  std::vector<int> labels;  // 1 = rework, 0 = passed

  std::size_t size() const { return element_ids.size(); }
};

// One row per element over all meshes, ordered by (mesh id, element id).
// Every element must be labelled.
Dataset build_dataset(const std::vector<LabelledMesh>& meshes,
                      const FeatureConfig& config);

// Header "mesh_id,element_id,f_0,...,f_{D-1},label".
std::string feature_csv(const Dataset& dataset);

}  // namespace meshgrade

#endif

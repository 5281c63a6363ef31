#include "meshgrade/model_io.hpp"

#include <json.hpp>

#include "meshgrade/error.hpp"

namespace meshgrade {

namespace {

using Json = nlohmann::ordered_json;

Json tree_to_json(const Tree& tree) {
  Json nodes = Json::array();
  for (const TreeNode& node : tree.nodes) {
    nodes.push_back(Json::array({node.attribute, node.cut, node.left,
                                 node.right, node.rework, node.passed}));
  }
  return nodes;
}

Tree tree_from_json(const Json& nodes, int dimension) {
  if (!nodes.is_array() || nodes.empty()) {
    throw ModelError("tree payload must be a non-empty array");
  }
  Tree tree;
  const int count = static_cast<int>(nodes.size());
  for (const Json& entry : nodes) {
    if (!entry.is_array() || entry.size() != 6) {
      throw ModelError("tree node must be a 6-entry array");
    }
    TreeNode node;
    node.attribute = entry[0].get<int>();
    node.cut = entry[1].get<double>();
    node.left = entry[2].get<int>();
    node.right = entry[3].get<int>();
    node.rework = entry[4].get<int>();
    node.passed = entry[5].get<int>();
    if (node.is_leaf()) {
      if (node.rework < 0 || node.passed < 0 ||
          node.rework + node.passed <= 0) {
        throw ModelError("leaf with invalid class counts");
      }
    } else {
      if (node.attribute >= dimension) {
        throw ModelError("split attribute out of range");
      }
      if (node.left < 0 || node.left >= count || node.right < 0 ||
          node.right >= count) {
        throw ModelError("tree child index out of range");
      }
    }
    tree.nodes.push_back(node);
  }
  return tree;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const Json& value, const char* where) {
  if (!value.is_array()) {
    throw ModelError(std::string(where) + " must be an array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw ModelError(std::string(where) + " must hold numbers");
    }
    v[static_cast<Eigen::Index>(i)] = value[i].get<double>();
  }
  return v;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& value, const char* where) {
  if (!value.is_array() || value.empty()) {
    throw ModelError(std::string(where) + " must be a non-empty array");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(value.size());
  const Eigen::Index cols =
      static_cast<Eigen::Index>(value[0].is_array() ? value[0].size() : 0);
  if (cols == 0) {
    throw ModelError(std::string(where) + " rows must be non-empty arrays");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ModelError(std::string(where) + " rows have uneven lengths");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

void check_fnn_shapes(const FnnModel& model) {
  if (model.layers.size() != model.hidden_sizes.size() + 1) {
    throw ModelError("layer count does not match architecture");
  }
  Eigen::Index width = model.dimension;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const DenseLayer& layer = model.layers[l];
    if (layer.w.cols() != width) {
      throw ModelError("layer " + std::to_string(l) +
                       " input width breaks the dimension chain");
    }
    const Eigen::Index expected =
        l < model.hidden_sizes.size() ? model.hidden_sizes[l] : 1;
    if (layer.w.rows() != expected || layer.b.size() != expected) {
      throw ModelError("layer " + std::to_string(l) +
                       " output width breaks the dimension chain");
    }
    width = expected;
  }
  if (model.norms.size() > std::min<std::size_t>(2, model.hidden_sizes.size())) {
    throw ModelError("too many normalisation layers");
  }
  for (std::size_t l = 0; l < model.norms.size(); ++l) {
    const BatchNormLayer& norm = model.norms[l];
    const Eigen::Index expected = model.hidden_sizes[l];
    if (norm.gamma.size() != expected || norm.beta.size() != expected ||
        norm.running_mean.size() != expected ||
        norm.running_var.size() != expected) {
      throw ModelError("normalisation " + std::to_string(l) +
                       " width breaks the dimension chain");
    }
    if ((norm.running_var.array() <= 0.0).any()) {
      throw ModelError("running variances must be strictly positive");
    }
  }
}

}  // namespace

ModelKind kind_of(const Model& model) {
  return std::holds_alternative<FnnModel>(model) ? ModelKind::fnn
                                                 : ModelKind::extra_trees;
}

std::string save_model(const Model& model) {
  Json document;
  document["format"] = kModelFormatTag;
  document["kind"] = to_string(kind_of(model));

  if (const auto* trees = std::get_if<ExtraTreesModel>(&model)) {
    document["dimension"] = trees->dimension;
    document["tree_count"] = static_cast<int>(trees->trees.size());
    document["attributes_per_split"] = trees->attributes_per_split;
    document["min_samples_split"] = trees->min_samples_split;
    document["seed"] = trees->seed;
    Json payload = Json::array();
    for (const Tree& tree : trees->trees) {
      payload.push_back(tree_to_json(tree));
    }
    document["trees"] = std::move(payload);
  } else {
    const FnnModel& fnn = std::get<FnnModel>(model);
    document["dimension"] = fnn.dimension;
    document["hidden_sizes"] = fnn.hidden_sizes;
    document["epsilon"] = fnn.epsilon;
    Json layers = Json::array();
    for (const DenseLayer& layer : fnn.layers) {
      Json entry;
      entry["w"] = matrix_to_json(layer.w);
      entry["b"] = vector_to_json(layer.b);
      layers.push_back(std::move(entry));
    }
    document["layers"] = std::move(layers);
    Json norms = Json::array();
    for (const BatchNormLayer& norm : fnn.norms) {
      Json entry;
      entry["gamma"] = vector_to_json(norm.gamma);
      entry["beta"] = vector_to_json(norm.beta);
      entry["running_mean"] = vector_to_json(norm.running_mean);
      entry["running_var"] = vector_to_json(norm.running_var);
      norms.push_back(std::move(entry));
    }
    document["norms"] = std::move(norms);
  }

  return document.dump(2) + "\n";
}

namespace {

Model load_model_checked(const std::string& text) {
  Json document = Json::parse(text, nullptr, false);
  if (document.is_discarded() || !document.is_object()) {
    throw ParseError("model document is not well-formed");
  }
  if (!document.contains("format") || !document["format"].is_string() ||
      document["format"].get<std::string>() != kModelFormatTag) {
    throw ModelError(std::string("missing or unsupported model format tag, "
                                 "expected \"") +
                     kModelFormatTag + "\"");
  }
  if (!document.contains("kind") || !document["kind"].is_string()) {
    throw ModelError("model document needs a \"kind\"");
  }
  const ModelKind kind =
      model_kind_from_string(document["kind"].get<std::string>());
  if (!document.contains("dimension") ||
      !document["dimension"].is_number_integer()) {
    throw ModelError("model document needs an integer \"dimension\"");
  }
  const int dimension = document["dimension"].get<int>();
  if (dimension < 1) throw ModelError("dimension must be positive");

  if (kind == ModelKind::extra_trees) {
    ExtraTreesModel model;
    model.dimension = dimension;
    model.attributes_per_split =
        document.value("attributes_per_split", 0);
    model.min_samples_split = document.value("min_samples_split", 2);
    model.seed = document.value("seed", std::uint64_t{0});
    if (!document.contains("trees") || !document["trees"].is_array() ||
        document["trees"].empty()) {
      throw ModelError("model document needs a non-empty \"trees\" array");
    }
    for (const Json& tree : document["trees"]) {
      model.trees.push_back(tree_from_json(tree, dimension));
    }
    if (document.contains("tree_count") &&
        document["tree_count"].get<int>() !=
            static_cast<int>(model.trees.size())) {
      throw ModelError("tree_count disagrees with the trees array");
    }
    return model;
  }

  FnnModel model;
  model.dimension = dimension;
  if (!document.contains("hidden_sizes") ||
      !document["hidden_sizes"].is_array()) {
    throw ModelError("model document needs \"hidden_sizes\"");
  }
  model.hidden_sizes =
      document["hidden_sizes"].get<std::vector<int>>();
  model.epsilon = document.value("epsilon", 1e-5);
  if (!document.contains("layers") || !document["layers"].is_array()) {
    throw ModelError("model document needs \"layers\"");
  }
  for (const Json& entry : document["layers"]) {
    DenseLayer layer;
    layer.w = matrix_from_json(entry.at("w"), "layer weight");
    layer.b = vector_from_json(entry.at("b"), "layer bias");
    model.layers.push_back(std::move(layer));
  }
  if (document.contains("norms")) {
    for (const Json& entry : document["norms"]) {
      BatchNormLayer norm;
      norm.gamma = vector_from_json(entry.at("gamma"), "gamma");
      norm.beta = vector_from_json(entry.at("beta"), "beta");
      norm.running_mean =
          vector_from_json(entry.at("running_mean"), "running mean");
      norm.running_var =
          vector_from_json(entry.at("running_var"), "running variance");
      model.norms.push_back(std::move(norm));
    }
  }
  check_fnn_shapes(model);
  return model;
}

}  // namespace

Model load_model(const std::string& text) {
  try {
    return load_model_checked(text);
  } catch (const Json::exception& error) {
    throw ModelError(std::string("malformed model payload: ") + error.what());
  }
}

namespace {

int dimension_of(const Model& model) {
  if (const auto* trees = std::get_if<ExtraTreesModel>(&model)) {
    return trees->dimension;
  }
  return std::get<FnnModel>(model).dimension;
}

void check_input_width(const Model& model, Eigen::Index width) {
  if (width != dimension_of(model)) {
    throw ModelError("input has " + std::to_string(width) +
                     " features but the model expects " +
                     std::to_string(dimension_of(model)));
  }
}

}  // namespace

double predict_proba(const Model& model, const Eigen::VectorXd& x) {
  check_input_width(model, x.size());
  if (const auto* trees = std::get_if<ExtraTreesModel>(&model)) {
    return predict_proba(*trees, x);
  }
  return fnn_predict_proba(std::get<FnnModel>(model), x);
}

Eigen::VectorXd predict_proba(const Model& model, const Eigen::MatrixXd& x) {
  check_input_width(model, x.cols());
  if (const auto* trees = std::get_if<ExtraTreesModel>(&model)) {
    return predict_proba(*trees, x);
  }
  return fnn_predict_proba(std::get<FnnModel>(model), x);
}

}  // namespace meshgrade

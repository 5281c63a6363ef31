#ifndef MESHGRADE_MODEL_IO_HPP
#define MESHGRADE_MODEL_IO_HPP

#include <string>
#include <variant>

#include "meshgrade/extra_trees.hpp"
#include "meshgrade/fnn.hpp"

namespace meshgrade {

inline constexpr const char* kModelFormatTag = "meshgrade-model/v1";

using Model = std::variant<ExtraTreesModel, FnnModel>;

ModelKind kind_of(const Model& model);

// Versioned self-describing document; numeric payload roundtrips exactly,
// so equal models serialize byte-identically.
std::string save_model(const Model& model);

// Validates the tag, kind, and dimension chain before returning.
Model load_model(const std::string& text);

double predict_proba(const Model& model, const Eigen::VectorXd& x);
Eigen::VectorXd predict_proba(const Model& model, const Eigen::MatrixXd& x);

// Inclusive cut: probability >= threshold means rework.
inline Label apply_threshold(double probability, double threshold) {
  return probability >= threshold ? Label::rework : Label::passed;
}

}  // namespace meshgrade

#endif

#ifndef MESHGRADE_FNN_HPP
#define MESHGRADE_FNN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "meshgrade/features.hpp"
#include "meshgrade/train_config.hpp"

namespace meshgrade {

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
};

struct BatchNormLayer {
  Eigen::VectorXd gamma;
  Eigen::VectorXd beta;
  Eigen::VectorXd running_mean;
  Eigen::VectorXd running_var;
};

// ReLU hidden layers with normalisation after the first two activations,
// sigmoid output unit. Inference normalises with running statistics.
struct FnnModel {
  int dimension = 0;
  std::vector<int> hidden_sizes;
  std::vector<DenseLayer> layers;     // hidden_sizes.size() + 1
  std::vector<BatchNormLayer> norms;  // min(2, hidden layer count)
  double epsilon = 1e-5;              // variance floor offset
};

// Gradient of the mean loss w.r.t. every trainable parameter; shapes
// mirror the model (running statistics are not trained).
struct FnnGradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  std::vector<Eigen::VectorXd> gamma;
  std::vector<Eigen::VectorXd> beta;
};

struct BatchStats {
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::VectorXd> var;  // biased batch variance
};

struct FnnTrainLog {
  std::vector<double> train_loss;
  std::vector<double> validation_loss;  // empty without a validation split
  int best_epoch = -1;
};

// Binary cross-entropy of the batch under training-mode normalisation
// (batch statistics); the model's running statistics stay untouched.
double fnn_training_loss(const FnnModel& model, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y);

// Same forward plus analytic gradients; stats (when given) receives the
// batch statistics for the caller's running-average update.
double fnn_training_gradients(const FnnModel& model, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y, FnnGradients& grads,
                              BatchStats* stats = nullptr);

// Inference-mode counterparts (running statistics, no batch coupling).
double fnn_inference_loss(const FnnModel& model, const Eigen::MatrixXd& x,
                          const Eigen::VectorXd& y);
double fnn_inference_gradients(const FnnModel& model, const Eigen::MatrixXd& x,
                               const Eigen::VectorXd& y, FnnGradients& grads);

// Probabilities clamped to (0, 1) by 1e-12 at both ends.
double fnn_predict_proba(const FnnModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd fnn_predict_proba(const FnnModel& model,
                                  const Eigen::MatrixXd& x);

// Max relative error between analytic and central-difference gradients of
// the inference-mode loss, over every trainable parameter.
double fnn_gradient_check(const FnnModel& model, const Eigen::VectorXd& x,
                          int label, double epsilon);

// Mini-batch Adam on binary cross-entropy; returns the parameters of the
// best validation-loss epoch (final epoch without a validation split).
FnnModel train_fnn(const Dataset& data, const TrainConfig& config,
                   FnnTrainLog* log = nullptr);

// Fully randomised parameters including running statistics; for tests.
FnnModel make_random_fnn(int dimension, const std::vector<int>& hidden_sizes,
                         std::uint64_t seed);

}  // namespace meshgrade

#endif

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Core>
#include <cmath>
#include <numeric>
#include <vector>

#include "meshgrade/error.hpp"
#include "meshgrade/fnn.hpp"
#include "meshgrade/model_io.hpp"
#include "meshgrade/random.hpp"
#include "meshgrade/train_config.hpp"

using namespace meshgrade;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// 2 -> 2 -> 1 with fixed weights and no normalisation; activations are
// hand-traceable.
FnnModel tiny_plain_fnn() {
  FnnModel model;
  model.dimension = 2;
  model.hidden_sizes = {2};
  DenseLayer first;
  first.w.resize(2, 2);
  first.w << 1, 0, 0, 1;
  first.b = Eigen::VectorXd::Zero(2);
  DenseLayer out;
  out.w.resize(1, 2);
  out.w << 2, 3;
  out.b = Eigen::VectorXd::Constant(1, -1.0);
  model.layers = {first, out};
  return model;
}

Dataset make_dataset(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  Dataset dataset;
  dataset.x = x;
  dataset.labels = labels;
  dataset.mesh_ids.assign(labels.size(), "m");
  dataset.element_ids.resize(labels.size());
  std::iota(dataset.element_ids.begin(), dataset.element_ids.end(), 1);
  return dataset;
}

Dataset separable_dataset(int rows, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(rows, 2);
  std::vector<int> labels;
  for (int i = 0; i < rows; ++i) {
    const int label = static_cast<int>(uniform_index(rng, 2));
    const double centre = label == 1 ? 1.5 : -1.5;
    x(i, 0) = centre + normal_unit(rng) * 0.3;
    x(i, 1) = normal_unit(rng) * 0.3;
    labels.push_back(label);
  }
  return make_dataset(x, labels);
}

}  // namespace

TEST_CASE("forward pass matches a hand trace without normalisation") {
  const FnnModel model = tiny_plain_fnn();

  Eigen::VectorXd x(2);
  x << 1, -1;  // hidden (1, -1) -> relu (1, 0) -> logit 2*1 + 3*0 - 1 = 1
  CHECK(fnn_predict_proba(model, x) == doctest::Approx(sigmoid(1.0)));

  x << -2, 3;  // relu (0, 3) -> logit 9 - 1 = 8
  CHECK(fnn_predict_proba(model, x) == doctest::Approx(sigmoid(8.0)));

  // Loss softplus(z) - y z at logit 1.
  const Eigen::MatrixXd xb = Eigen::RowVector2d(1, -1);
  const double expected = std::log1p(std::exp(1.0)) - 1.0;
  CHECK(fnn_inference_loss(model, xb, Eigen::VectorXd::Ones(1)) ==
        doctest::Approx(expected));
  // Without normalisation layers the two modes coincide.
  CHECK(fnn_training_loss(model, xb, Eigen::VectorXd::Ones(1)) ==
        doctest::Approx(expected));
}

TEST_CASE("inference normalisation uses the running statistics") {
  FnnModel model = tiny_plain_fnn();
  model.epsilon = 0.0;  // exact hand arithmetic
  BatchNormLayer norm;
  norm.gamma = Eigen::Vector2d(2.0, 2.0);
  norm.beta = Eigen::Vector2d(0.5, 0.5);
  norm.running_mean = Eigen::Vector2d(0.5, 0.0);
  norm.running_var = Eigen::Vector2d(0.25, 1.0);
  model.norms = {norm};

  // relu (1, 0); normalised ((1-0.5)/0.5, 0) = (1, 0); scaled (2.5, 0.5);
  // logit 2*2.5 + 3*0.5 - 1 = 5.5.
  Eigen::VectorXd x(2);
  x << 1, -1;
  CHECK(fnn_predict_proba(model, x) == doctest::Approx(sigmoid(5.5)));
}

TEST_CASE("training mode normalises with batch statistics") {
  const FnnModel model = make_random_fnn(3, {4, 4}, 8);
  Rng rng(10);
  Eigen::MatrixXd x(6, 3);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = normal_unit(rng);
    y[i] = i % 2;
  }
  // Random running statistics disagree with the batch statistics, so the
  // two modes must disagree too.
  const double training = fnn_training_loss(model, x, y);
  const double inference = fnn_inference_loss(model, x, y);
  CHECK(std::abs(training - inference) > 1e-8);

  FnnGradients grads;
  BatchStats stats;
  fnn_training_gradients(model, x, y, grads, &stats);
  REQUIRE(stats.mean.size() == 2);
  // Batch statistics describe the post-activation values, so means are
  // non-negative for ReLU outputs.
  for (const Eigen::VectorXd& mean : stats.mean) {
    CHECK((mean.array() >= 0.0).all());
  }
}

TEST_CASE("probabilities are clamped away from 0 and 1") {
  FnnModel model = tiny_plain_fnn();
  model.layers[1].b[0] = 1000.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  CHECK(fnn_predict_proba(model, x) == 1.0 - 1e-12);
  model.layers[1].b[0] = -1000.0;
  CHECK(fnn_predict_proba(model, x) == 1e-12);
}

TEST_CASE("batch prediction matches per-row prediction") {
  const FnnModel model = make_random_fnn(5, {6, 4}, 19);
  Rng rng(20);
  Eigen::MatrixXd x(7, 5);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) x(i, j) = normal_unit(rng);
  }
  const Eigen::VectorXd batch = fnn_predict_proba(model, x);
  for (int i = 0; i < 7; ++i) {
    CHECK(batch[i] ==
          doctest::Approx(fnn_predict_proba(model, Eigen::VectorXd(x.row(i))))
              .epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients agree with central differences") {
  Rng rng(123);
  for (int trial = 0; trial < 8; ++trial) {
    const int dimension = 2 + static_cast<int>(uniform_index(rng, 5));
    std::vector<int> hidden;
    const int depth = 1 + static_cast<int>(uniform_index(rng, 3));
    for (int l = 0; l < depth; ++l) {
      hidden.push_back(2 + static_cast<int>(uniform_index(rng, 4)));
    }
    const FnnModel model =
        make_random_fnn(dimension, hidden, derive_seed(55, trial));
    Eigen::VectorXd x(dimension);
    for (int j = 0; j < dimension; ++j) x[j] = normal_unit(rng);
    const int label = trial % 2;
    CHECK(fnn_gradient_check(model, x, label, 1e-6) < 1e-4);
  }
}

TEST_CASE("training reduces the loss and fits separable data") {
  const Dataset data = separable_dataset(300, 42);
  TrainConfig config;
  config.kind = ModelKind::fnn;
  config.seed = 7;
  config.hidden_sizes = {8};
  config.batch_size = 32;
  config.max_epochs = 30;
  config.patience = 30;
  config.validation_fraction = 0.0;

  FnnTrainLog log;
  const FnnModel model = train_fnn(data, config, &log);
  REQUIRE(!log.train_loss.empty());
  CHECK(log.validation_loss.empty());
  CHECK(log.best_epoch == static_cast<int>(log.train_loss.size()) - 1);
  CHECK(log.train_loss.back() < log.train_loss.front());

  const Eigen::VectorXd probabilities = fnn_predict_proba(model, data.x);
  int correct = 0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const int predicted = probabilities[i] >= 0.5 ? 1 : 0;
    if (predicted == data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(data.size()) >=
        0.95);
}

TEST_CASE("validation split tracks the best epoch") {
  const Dataset data = separable_dataset(200, 77);
  TrainConfig config;
  config.kind = ModelKind::fnn;
  config.seed = 3;
  config.hidden_sizes = {6};
  config.batch_size = 32;
  config.max_epochs = 20;
  config.patience = 3;

  FnnTrainLog log;
  train_fnn(data, config, &log);
  REQUIRE(!log.validation_loss.empty());
  CHECK(log.validation_loss.size() == log.train_loss.size());
  REQUIRE(log.best_epoch >= 0);
  REQUIRE(log.best_epoch < static_cast<int>(log.validation_loss.size()));
  const double best =
      log.validation_loss[static_cast<std::size_t>(log.best_epoch)];
  for (double loss : log.validation_loss) {
    CHECK(best <= loss + 1e-15);
  }
}

TEST_CASE("stale validation loss stops training early") {
  // Pure label noise: validation loss cannot keep improving for long.
  Rng rng(5);
  Eigen::MatrixXd x(120, 3);
  std::vector<int> labels;
  for (int i = 0; i < 120; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = normal_unit(rng);
    labels.push_back(static_cast<int>(uniform_index(rng, 2)));
  }
  TrainConfig config;
  config.kind = ModelKind::fnn;
  config.seed = 11;
  config.hidden_sizes = {16};
  config.batch_size = 16;
  config.max_epochs = 200;
  config.patience = 4;

  FnnTrainLog log;
  train_fnn(make_dataset(x, labels), config, &log);
  CHECK(log.train_loss.size() < 200);
}

TEST_CASE("same seed retrains bit for bit") {
  const Dataset data = separable_dataset(150, 8);
  TrainConfig config;
  config.kind = ModelKind::fnn;
  config.seed = 99;
  config.hidden_sizes = {8, 4};
  config.batch_size = 32;
  config.max_epochs = 6;

  const std::string first = save_model(train_fnn(data, config));
  const std::string second = save_model(train_fnn(data, config));
  CHECK(first == second);

  config.seed = 100;
  CHECK(save_model(train_fnn(data, config)) != first);
}

TEST_CASE("serialisation roundtrip preserves predictions exactly") {
  const Dataset data = separable_dataset(150, 31);
  TrainConfig config;
  config.kind = ModelKind::fnn;
  config.hidden_sizes = {6, 3};
  config.batch_size = 32;
  config.max_epochs = 4;
  const FnnModel trained = train_fnn(data, config);

  const std::string text = save_model(trained);
  const Model loaded = load_model(text);
  REQUIRE(kind_of(loaded) == ModelKind::fnn);
  CHECK(save_model(loaded) == text);

  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(2);
    x << normal_unit(rng), normal_unit(rng);
    CHECK(predict_proba(loaded, x) == fnn_predict_proba(trained, x));
  }
}

TEST_CASE("model loader verifies the dimension chain") {
  const FnnModel model = make_random_fnn(4, {3, 2}, 1);
  std::string text = save_model(model);
  // Claiming a different input width must fail shape validation.
  const std::string needle = "\"dimension\": 4";
  const std::size_t at = text.find(needle);
  REQUIRE(at != std::string::npos);
  text.replace(at, needle.size(), "\"dimension\": 5");
  CHECK_THROWS_AS(load_model(text), ModelError);
}

TEST_CASE("training rejects bad inputs and reports divergence") {
  TrainConfig config;
  config.kind = ModelKind::fnn;
  CHECK_THROWS_AS(train_fnn(Dataset{}, config), ModelError);

  // An absurd step size overflows the logits within an epoch or two.
  const Dataset data = separable_dataset(20, 3);
  config.hidden_sizes = {4, 4};
  config.batch_size = 10;
  config.max_epochs = 10;
  config.learning_rate = 1e160;
  CHECK_THROWS_AS(train_fnn(data, config), ModelError);
}

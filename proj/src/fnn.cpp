#include "meshgrade/fnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meshgrade/error.hpp"
#include "meshgrade/random.hpp"

namespace meshgrade {

namespace {

constexpr double kProbClamp = 1e-12;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;
constexpr double kRunningMomentum = 0.9;

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow for large |z|.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

enum class Mode { training, inference };

struct ForwardCache {
  std::vector<Eigen::MatrixXd> inputs;  // input to each dense layer
  std::vector<Eigen::MatrixXd> z;       // hidden pre-activations
  std::vector<Eigen::MatrixXd> xhat;    // normalised activations per norm
  std::vector<Eigen::VectorXd> inv_std; // per norm
  std::vector<Eigen::VectorXd> mean;    // batch stats (training mode)
  std::vector<Eigen::VectorXd> var;
  Eigen::VectorXd logits;
};

void check_dimension(const FnnModel& model, Eigen::Index cols) {
  if (static_cast<int>(cols) != model.dimension) {
    throw ModelError("feature vector length " + std::to_string(cols) +
                     " does not match model dimension " +
                     std::to_string(model.dimension));
  }
}

void run_forward(const FnnModel& model, const Eigen::MatrixXd& x, Mode mode,
                 ForwardCache& cache) {
  check_dimension(model, x.cols());
  const std::size_t hidden = model.hidden_sizes.size();
  const double batch = static_cast<double>(x.rows());

  cache.inputs.clear();
  cache.z.clear();
  cache.xhat.clear();
  cache.inv_std.clear();
  cache.mean.clear();
  cache.var.clear();

  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < hidden; ++l) {
    cache.inputs.push_back(h);
    const DenseLayer& layer = model.layers[l];
    Eigen::MatrixXd z =
        (h * layer.w.transpose()).rowwise() + layer.b.transpose();
    Eigen::MatrixXd a = z.cwiseMax(0.0);
    cache.z.push_back(std::move(z));

    if (l < model.norms.size()) {
      const BatchNormLayer& norm = model.norms[l];
      Eigen::VectorXd mu;
      Eigen::VectorXd variance;
      if (mode == Mode::training) {
        mu = a.colwise().mean().transpose();
        const Eigen::MatrixXd centered = a.rowwise() - mu.transpose();
        variance =
            (centered.array().square().colwise().sum() / batch)
                .matrix()
                .transpose();
        cache.mean.push_back(mu);
        cache.var.push_back(variance);
      } else {
        mu = norm.running_mean;
        variance = norm.running_var;
      }
      const Eigen::VectorXd inv_std =
          (variance.array() + model.epsilon).rsqrt().matrix();
      Eigen::MatrixXd xhat =
          ((a.rowwise() - mu.transpose()).array().rowwise() *
           inv_std.transpose().array())
              .matrix();
      h = ((xhat.array().rowwise() * norm.gamma.transpose().array())
               .rowwise() +
           norm.beta.transpose().array())
              .matrix();
      cache.xhat.push_back(std::move(xhat));
      cache.inv_std.push_back(inv_std);
    } else {
      h = std::move(a);
    }
  }

  cache.inputs.push_back(std::move(h));
  const DenseLayer& out = model.layers[hidden];
  cache.logits = (cache.inputs.back() * out.w.transpose()).col(0) +
                 Eigen::VectorXd::Constant(x.rows(), out.b[0]);
}

double mean_loss(const Eigen::VectorXd& logits, const Eigen::VectorXd& y) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    sum += softplus(logits[i]) - y[i] * logits[i];
  }
  return sum / static_cast<double>(logits.size());
}

void resize_gradients(const FnnModel& model, FnnGradients& grads) {
  grads.w.resize(model.layers.size());
  grads.b.resize(model.layers.size());
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    grads.w[l].setZero(model.layers[l].w.rows(), model.layers[l].w.cols());
    grads.b[l].setZero(model.layers[l].b.size());
  }
  grads.gamma.resize(model.norms.size());
  grads.beta.resize(model.norms.size());
  for (std::size_t l = 0; l < model.norms.size(); ++l) {
    grads.gamma[l].setZero(model.norms[l].gamma.size());
    grads.beta[l].setZero(model.norms[l].beta.size());
  }
}

double loss_and_gradients(const FnnModel& model, const Eigen::MatrixXd& x,
                          const Eigen::VectorXd& y, Mode mode,
                          FnnGradients* grads, BatchStats* stats) {
  if (x.rows() != y.size()) {
    throw ModelError("batch rows and targets disagree");
  }
  ForwardCache cache;
  run_forward(model, x, mode, cache);
  const double loss = mean_loss(cache.logits, y);
  if (stats) {
    stats->mean = cache.mean;
    stats->var = cache.var;
  }
  if (!grads) return loss;

  resize_gradients(model, *grads);
  const double batch = static_cast<double>(x.rows());
  const std::size_t hidden = model.hidden_sizes.size();

  Eigen::VectorXd dlogits(cache.logits.size());
  for (Eigen::Index i = 0; i < dlogits.size(); ++i) {
    dlogits[i] = (stable_sigmoid(cache.logits[i]) - y[i]) / batch;
  }

  grads->w[hidden] = dlogits.transpose() * cache.inputs[hidden];
  grads->b[hidden][0] = dlogits.sum();
  Eigen::MatrixXd dh = dlogits * model.layers[hidden].w;

  for (std::size_t l = hidden; l-- > 0;) {
    Eigen::MatrixXd da;
    if (l < model.norms.size()) {
      const BatchNormLayer& norm = model.norms[l];
      const Eigen::MatrixXd& xhat = cache.xhat[l];
      grads->beta[l] = dh.colwise().sum().transpose();
      grads->gamma[l] =
          (dh.array() * xhat.array()).colwise().sum().matrix().transpose();
      const Eigen::MatrixXd dxhat =
          (dh.array().rowwise() * norm.gamma.transpose().array()).matrix();
      if (mode == Mode::training) {
        const Eigen::RowVectorXd sum_dxhat = dxhat.colwise().sum();
        const Eigen::RowVectorXd sum_dxhat_xhat =
            (dxhat.array() * xhat.array()).colwise().sum().matrix();
        Eigen::MatrixXd numerator = batch * dxhat;
        numerator.rowwise() -= sum_dxhat;
        numerator -=
            (xhat.array().rowwise() * sum_dxhat_xhat.array()).matrix();
        da = (numerator.array().rowwise() *
              (cache.inv_std[l].transpose().array() / batch))
                 .matrix();
      } else {
        da = (dxhat.array().rowwise() *
              cache.inv_std[l].transpose().array())
                 .matrix();
      }
    } else {
      da = std::move(dh);
    }

    const Eigen::MatrixXd dz =
        (da.array() * (cache.z[l].array() > 0.0).cast<double>()).matrix();
    grads->w[l] = dz.transpose() * cache.inputs[l];
    grads->b[l] = dz.colwise().sum().transpose();
    if (l > 0) dh = dz * model.layers[l].w;
  }

  return loss;
}

double clamp_probability(double p) {
  return std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
}

FnnModel initial_fnn(int dimension, const std::vector<int>& hidden_sizes,
                     Rng& rng) {
  FnnModel model;
  model.dimension = dimension;
  model.hidden_sizes = hidden_sizes;

  std::vector<int> widths{dimension};
  widths.insert(widths.end(), hidden_sizes.begin(), hidden_sizes.end());
  widths.push_back(1);

  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer;
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
    layer.w.resize(fan_out, fan_in);
    for (int i = 0; i < fan_out; ++i) {
      for (int j = 0; j < fan_in; ++j) {
        layer.w(i, j) = normal_unit(rng) * scale;
      }
    }
    layer.b = Eigen::VectorXd::Zero(fan_out);
    model.layers.push_back(std::move(layer));
  }

  const std::size_t norm_count =
      std::min<std::size_t>(2, hidden_sizes.size());
  for (std::size_t l = 0; l < norm_count; ++l) {
    BatchNormLayer norm;
    const int width = hidden_sizes[l];
    norm.gamma = Eigen::VectorXd::Ones(width);
    norm.beta = Eigen::VectorXd::Zero(width);
    norm.running_mean = Eigen::VectorXd::Zero(width);
    norm.running_var = Eigen::VectorXd::Ones(width);
    model.norms.push_back(std::move(norm));
  }
  return model;
}

}  // namespace

double fnn_training_loss(const FnnModel& model, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y) {
  return loss_and_gradients(model, x, y, Mode::training, nullptr, nullptr);
}

double fnn_training_gradients(const FnnModel& model, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y, FnnGradients& grads,
                              BatchStats* stats) {
  return loss_and_gradients(model, x, y, Mode::training, &grads, stats);
}

double fnn_inference_loss(const FnnModel& model, const Eigen::MatrixXd& x,
                          const Eigen::VectorXd& y) {
  return loss_and_gradients(model, x, y, Mode::inference, nullptr, nullptr);
}

double fnn_inference_gradients(const FnnModel& model, const Eigen::MatrixXd& x,
                               const Eigen::VectorXd& y,
                               FnnGradients& grads) {
  return loss_and_gradients(model, x, y, Mode::inference, &grads, nullptr);
}

Eigen::VectorXd fnn_predict_proba(const FnnModel& model,
                                  const Eigen::MatrixXd& x) {
  ForwardCache cache;
  run_forward(model, x, Mode::inference, cache);
  Eigen::VectorXd probabilities(cache.logits.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    probabilities[i] = clamp_probability(stable_sigmoid(cache.logits[i]));
  }
  return probabilities;
}

double fnn_predict_proba(const FnnModel& model, const Eigen::VectorXd& x) {
  return fnn_predict_proba(model, Eigen::MatrixXd(x.transpose()))[0];
}

double fnn_gradient_check(const FnnModel& model, const Eigen::VectorXd& x,
                          int label, double epsilon) {
  const Eigen::MatrixXd xb = x.transpose();
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, label ? 1.0 : 0.0);

  FnnGradients grads;
  fnn_inference_gradients(model, xb, y, grads);

  FnnModel probe = model;
  std::vector<double*> parameters;
  std::vector<double> analytic;
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    for (Eigen::Index i = 0; i < probe.layers[l].w.size(); ++i) {
      parameters.push_back(probe.layers[l].w.data() + i);
      analytic.push_back(grads.w[l].data()[i]);
    }
    for (Eigen::Index i = 0; i < probe.layers[l].b.size(); ++i) {
      parameters.push_back(probe.layers[l].b.data() + i);
      analytic.push_back(grads.b[l].data()[i]);
    }
  }
  for (std::size_t l = 0; l < probe.norms.size(); ++l) {
    for (Eigen::Index i = 0; i < probe.norms[l].gamma.size(); ++i) {
      parameters.push_back(probe.norms[l].gamma.data() + i);
      analytic.push_back(grads.gamma[l].data()[i]);
    }
    for (Eigen::Index i = 0; i < probe.norms[l].beta.size(); ++i) {
      parameters.push_back(probe.norms[l].beta.data() + i);
      analytic.push_back(grads.beta[l].data()[i]);
    }
  }

  double worst = 0.0;
  for (std::size_t p = 0; p < parameters.size(); ++p) {
    double* parameter = parameters[p];
    const double saved = *parameter;
    *parameter = saved + epsilon;
    const double up = fnn_inference_loss(probe, xb, y);
    *parameter = saved - epsilon;
    const double down = fnn_inference_loss(probe, xb, y);
    *parameter = saved;

    const double numeric = (up - down) / (2.0 * epsilon);
    const double magnitude =
        std::max(std::abs(analytic[p]), std::abs(numeric));
    if (magnitude > 1e-8) {
      worst = std::max(worst, std::abs(analytic[p] - numeric) / magnitude);
    }
  }
  return worst;
}

FnnModel train_fnn(const Dataset& data, const TrainConfig& config,
                   FnnTrainLog* log) {
  validate(config);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  if (n == 0) throw ModelError("cannot train on an empty dataset");
  if (data.labels.size() != data.size()) {
    throw ModelError("label count does not match row count");
  }
  const int dimension = static_cast<int>(data.x.cols());

  Rng rng(config.seed);
  FnnModel model = initial_fnn(dimension, config.hidden_sizes, rng);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order[static_cast<std::size_t>(i)] = i;
  }
  shuffle_in_place(order, rng);

  Eigen::Index holdout = 0;
  if (config.validation_fraction > 0.0 && n >= 2) {
    holdout = static_cast<Eigen::Index>(
        std::lround(config.validation_fraction * static_cast<double>(n)));
    holdout = std::max<Eigen::Index>(1, std::min(holdout, n - 1));
  }
  const Eigen::Index train_count = n - holdout;

  Eigen::MatrixXd x_val(holdout, dimension);
  Eigen::VectorXd y_val(holdout);
  for (Eigen::Index i = 0; i < holdout; ++i) {
    const Eigen::Index row = order[static_cast<std::size_t>(train_count + i)];
    x_val.row(i) = data.x.row(row);
    y_val[i] = data.labels[static_cast<std::size_t>(row)];
  }
  std::vector<Eigen::Index> train_rows(order.begin(),
                                       order.begin() + train_count);

  FnnGradients grads;
  FnnGradients adam_m;
  FnnGradients adam_v;
  resize_gradients(model, adam_m);
  resize_gradients(model, adam_v);

  long step = 0;
  auto adam_update = [&](auto& parameter, const auto& gradient,
                         auto& m_state, auto& v_state) {
    const double m_correction =
        1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
    const double v_correction =
        1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
    m_state = kAdamBeta1 * m_state + (1.0 - kAdamBeta1) * gradient;
    v_state = (kAdamBeta2 * v_state.array() +
               (1.0 - kAdamBeta2) * gradient.array().square())
                  .matrix();
    parameter.array() -= config.learning_rate *
                         (m_state.array() / m_correction) /
                         ((v_state.array() / v_correction).sqrt() +
                          kAdamEpsilon);
  };

  BatchStats stats;
  FnnModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  int stale_epochs = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    shuffle_in_place(train_rows, rng);
    double loss_sum = 0.0;

    for (Eigen::Index start = 0; start < train_count;
         start += config.batch_size) {
      const Eigen::Index size =
          std::min<Eigen::Index>(config.batch_size, train_count - start);
      Eigen::MatrixXd xb(size, dimension);
      Eigen::VectorXd yb(size);
      for (Eigen::Index i = 0; i < size; ++i) {
        const Eigen::Index row =
            train_rows[static_cast<std::size_t>(start + i)];
        xb.row(i) = data.x.row(row);
        yb[i] = data.labels[static_cast<std::size_t>(row)];
      }

      const double loss =
          fnn_training_gradients(model, xb, yb, grads, &stats);
      if (!std::isfinite(loss)) {
        throw ModelError("training diverged at epoch " +
                         std::to_string(epoch + 1));
      }
      loss_sum += loss * static_cast<double>(size);

      ++step;
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        adam_update(model.layers[l].w, grads.w[l], adam_m.w[l], adam_v.w[l]);
        adam_update(model.layers[l].b, grads.b[l], adam_m.b[l], adam_v.b[l]);
      }
      for (std::size_t l = 0; l < model.norms.size(); ++l) {
        adam_update(model.norms[l].gamma, grads.gamma[l], adam_m.gamma[l],
                    adam_v.gamma[l]);
        adam_update(model.norms[l].beta, grads.beta[l], adam_m.beta[l],
                    adam_v.beta[l]);
        model.norms[l].running_mean =
            kRunningMomentum * model.norms[l].running_mean +
            (1.0 - kRunningMomentum) * stats.mean[l];
        model.norms[l].running_var =
            kRunningMomentum * model.norms[l].running_var +
            (1.0 - kRunningMomentum) * stats.var[l];
      }
    }

    if (log) {
      log->train_loss.push_back(loss_sum / static_cast<double>(train_count));
    }

    if (holdout > 0) {
      const double val_loss = fnn_inference_loss(model, x_val, y_val);
      if (log) log->validation_loss.push_back(val_loss);
      if (!std::isfinite(val_loss)) {
        throw ModelError("training diverged at epoch " +
                         std::to_string(epoch + 1));
      }
      if (val_loss < best_val) {
        best_val = val_loss;
        best = model;
        best_epoch = epoch;
        stale_epochs = 0;
      } else {
        ++stale_epochs;
        if (stale_epochs >= config.patience) break;
      }
    } else {
      best = model;
      best_epoch = epoch;
    }
  }

  if (log) log->best_epoch = best_epoch;
  return best;
}

FnnModel make_random_fnn(int dimension, const std::vector<int>& hidden_sizes,
                         std::uint64_t seed) {
  Rng rng(seed);
  FnnModel model = initial_fnn(dimension, hidden_sizes, rng);
  for (DenseLayer& layer : model.layers) {
    for (Eigen::Index i = 0; i < layer.b.size(); ++i) {
      layer.b[i] = normal_unit(rng) * 0.1;
    }
  }
  for (BatchNormLayer& norm : model.norms) {
    for (Eigen::Index i = 0; i < norm.gamma.size(); ++i) {
      norm.gamma[i] = 0.5 + uniform_unit(rng);
    }
    for (Eigen::Index i = 0; i < norm.beta.size(); ++i) {
      norm.beta[i] = normal_unit(rng) * 0.2;
    }
    for (Eigen::Index i = 0; i < norm.running_mean.size(); ++i) {
      norm.running_mean[i] = normal_unit(rng) * 0.3;
    }
    for (Eigen::Index i = 0; i < norm.running_var.size(); ++i) {
      norm.running_var[i] = 0.5 + uniform_unit(rng);
    }
  }
  return model;
}

}  // namespace meshgrade

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fogcache/config.hpp"
#include "fogcache/rng.hpp"

namespace fogcache {

/// Fully connected ReLU network with a linear output layer, trained on the
/// squared error of one selected output by plain SGD or Adam.
class Mlp {
 public:
  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    double loss = 0.0;
  };

  Mlp() = default;

  /// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Mlp(std::vector<std::size_t> layer_sizes, double learning_rate, Rng& rng);

  /// All parameters zero.
  static Mlp zeros(std::vector<std::size_t> layer_sizes, double learning_rate);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t n_layers() const { return weights_.size(); }

  Eigen::MatrixXd& weights(std::size_t layer) { return weights_[layer]; }
  const Eigen::MatrixXd& weights(std::size_t layer) const { return weights_[layer]; }
  Eigen::VectorXd& biases(std::size_t layer) { return biases_[layer]; }
  const Eigen::VectorXd& biases(std::size_t layer) const { return biases_[layer]; }

  double learning_rate() const { return learning_rate_; }
  void set_learning_rate(double lr) { learning_rate_ = lr; }
  /// Bound on |dL/dQ| at the selected output; 0 disables clipping.
  double grad_clip() const { return grad_clip_; }
  void set_grad_clip(double clip) { grad_clip_ = clip; }
  Optimizer optimizer() const { return optimizer_; }
  /// Switching optimizer resets the Adam moment estimates.
  void set_optimizer(Optimizer opt);

  /// Throws ShapeError if input length differs from the first layer size.
  Eigen::VectorXd forward(std::span<const double> input) const;

  /// Gradient of (target - out[action])^2 with respect to every parameter.
  /// Throws TrainingError for a non-finite target.
  Gradients gradient(std::span<const double> input, std::size_t action, double target) const;

  /// One optimizer step on (target - out[action])^2; returns the pre-step loss.
  /// Throws TrainingError for a non-finite target.
  double train_step(std::span<const double> input, std::size_t action, double target);

  /// One optimizer step on the batch mean of (target_i - out_i[action_i])^2;
  /// returns the pre-step mean loss. Throws TrainingError if any target is
  /// non-finite, before touching the parameters.
  double train_batch(std::span<const std::vector<double>> inputs,
                     std::span<const std::size_t> actions, std::span<const double> targets);

  bool all_finite() const;

  friend bool operator==(const Mlp& a, const Mlp& b);

  void save(std::ostream& out) const;
  /// Throws std::runtime_error on a malformed checkpoint.
  static Mlp load(std::istream& in);

 private:
  double output_delta(double out, double target) const;
  void apply_update(std::size_t layer, const Eigen::MatrixXd& gw, const Eigen::VectorXd& gb);

  std::vector<std::size_t> sizes_;
  std::vector<Eigen::MatrixXd> weights_;  // weights_[l] is sizes_[l+1] x sizes_[l]
  std::vector<Eigen::VectorXd> biases_;
  double learning_rate_ = 0.001;
  double grad_clip_ = 0.0;
  Optimizer optimizer_ = Optimizer::sgd;
  // Adam first and second moments, same shapes as the parameters.
  std::vector<Eigen::MatrixXd> mw_, vw_;
  std::vector<Eigen::VectorXd> mb_, vb_;
  double beta1_pow_ = 1.0;
  double beta2_pow_ = 1.0;
};

/// Delayed-update snapshot: an independent value copy of `source`.
inline Mlp sync_target(const Mlp& source) { return source; }

}  // namespace fogcache

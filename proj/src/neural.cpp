#include "fogcache/neural.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fogcache/errors.hpp"

namespace fogcache {

namespace {

constexpr const char* kCheckpointMagic = "fogcache-mlp";
constexpr int kCheckpointVersion = 1;
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

void check_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw ShapeError("Mlp: need at least input and output layers");
  for (auto s : sizes) {
    if (s == 0) throw ShapeError("Mlp: layer sizes must be positive");
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_sizes, double learning_rate, Rng& rng)
    : sizes_(std::move(layer_sizes)), learning_rate_(learning_rate) {
  check_sizes(sizes_);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(sizes_[l + 1]);
    const auto cols = static_cast<Eigen::Index>(sizes_[l]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    auto draw = [&] { return (2.0 * uniform01(rng) - 1.0) * bound; };
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = draw();
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) b(r) = draw();
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
}

Mlp Mlp::zeros(std::vector<std::size_t> layer_sizes, double learning_rate) {
  check_sizes(layer_sizes);
  Mlp net;
  net.sizes_ = std::move(layer_sizes);
  net.learning_rate_ = learning_rate;
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    net.weights_.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(net.sizes_[l + 1]),
                                                 static_cast<Eigen::Index>(net.sizes_[l])));
    net.biases_.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.sizes_[l + 1])));
  }
  return net;
}

Eigen::VectorXd Mlp::forward(std::span<const double> input) const {
  if (input.size() != input_size()) {
    throw ShapeError("Mlp::forward: input length " + std::to_string(input.size()) +
                     ", expected " + std::to_string(input_size()));
  }
  Eigen::VectorXd h = as_vector(input);
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::VectorXd z = biases_[l];
    z.noalias() += weights_[l] * h;
    if (l + 1 < weights_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

double Mlp::output_delta(double out, double target) const {
  double delta = 2.0 * (out - target);
  if (grad_clip_ > 0.0) delta = std::clamp(delta, -grad_clip_, grad_clip_);
  return delta;
}

Mlp::Gradients Mlp::gradient(std::span<const double> input, std::size_t action,
                             double target) const {
  if (!std::isfinite(target)) throw TrainingError("Mlp::gradient: non-finite target");
  if (input.size() != input_size()) throw ShapeError("Mlp::gradient: input length mismatch");
  if (action >= output_size()) throw ShapeError("Mlp::gradient: action out of range");

  const auto layers = weights_.size();
  std::vector<Eigen::VectorXd> acts(layers + 1);
  acts[0] = as_vector(input);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::VectorXd z = biases_[l];
    z.noalias() += weights_[l] * acts[l];
    acts[l + 1] = (l + 1 < layers) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  const double out = acts[layers](static_cast<Eigen::Index>(action));

  Gradients g;
  g.loss = (target - out) * (target - out);
  g.weights.resize(layers);
  g.biases.resize(layers);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(output_size()));
  delta(static_cast<Eigen::Index>(action)) = output_delta(out, target);
  for (std::size_t l = layers; l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose();
    g.biases[l] = delta;
    if (l > 0) {
      Eigen::VectorXd back = weights_[l].transpose() * delta;
      delta = back.array() * (acts[l].array() > 0.0).cast<double>();
    }
  }
  return g;
}

double Mlp::train_step(std::span<const double> input, std::size_t action, double target) {
  if (!std::isfinite(target)) throw TrainingError("Mlp::train_step: non-finite target");
  if (input.size() != input_size()) throw ShapeError("Mlp::train_step: input length mismatch");
  if (action >= output_size()) throw ShapeError("Mlp::train_step: action out of range");
  if (optimizer_ == Optimizer::adam) {
    auto g = gradient(input, action, target);
    beta1_pow_ *= kBeta1;
    beta2_pow_ *= kBeta2;
    for (std::size_t l = 0; l < weights_.size(); ++l) apply_update(l, g.weights[l], g.biases[l]);
    return g.loss;
  }

  const auto layers = weights_.size();
  std::vector<Eigen::VectorXd> acts(layers + 1);
  acts[0] = as_vector(input);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::VectorXd z = biases_[l];
    z.noalias() += weights_[l] * acts[l];
    acts[l + 1] = (l + 1 < layers) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  const auto a = static_cast<Eigen::Index>(action);
  const double out = acts[layers](a);
  const double loss = (target - out) * (target - out);
  const double lr = learning_rate_;

  // Output layer: only row `a` receives gradient.
  const double d_out = output_delta(out, target);
  Eigen::VectorXd delta;
  if (layers > 1) {
    delta = weights_[layers - 1].row(a).transpose() * d_out;
    delta.array() *= (acts[layers - 1].array() > 0.0).cast<double>();
  }
  weights_[layers - 1].row(a) -= (lr * d_out) * acts[layers - 1].transpose();
  biases_[layers - 1](a) -= lr * d_out;

  for (std::size_t l = layers - 1; l-- > 0;) {
    Eigen::VectorXd next;
    if (l > 0) {
      next.noalias() = weights_[l].transpose() * delta;
      next.array() *= (acts[l].array() > 0.0).cast<double>();
    }
    weights_[l].noalias() -= (lr * delta) * acts[l].transpose();
    biases_[l] -= lr * delta;
    delta = std::move(next);
  }
  return loss;
}

double Mlp::train_batch(std::span<const std::vector<double>> inputs,
                        std::span<const std::size_t> actions, std::span<const double> targets) {
  if (inputs.size() != actions.size() || inputs.size() != targets.size()) {
    throw ShapeError("Mlp::train_batch: batch length mismatch");
  }
  if (inputs.empty()) return 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!std::isfinite(targets[i])) throw TrainingError("Mlp::train_batch: non-finite target");
    if (inputs[i].size() != input_size()) throw ShapeError("Mlp::train_batch: input length mismatch");
    if (actions[i] >= output_size()) throw ShapeError("Mlp::train_batch: action out of range");
  }
  const auto layers = weights_.size();
  std::vector<Eigen::MatrixXd> gw(layers);
  std::vector<Eigen::VectorXd> gb(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    gw[l].setZero(weights_[l].rows(), weights_[l].cols());
    gb[l].setZero(biases_[l].size());
  }
  const double scale = 1.0 / static_cast<double>(inputs.size());
  std::vector<Eigen::VectorXd> acts(layers + 1);
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    acts[0] = as_vector(inputs[i]);
    for (std::size_t l = 0; l < layers; ++l) {
      Eigen::VectorXd z = biases_[l];
      z.noalias() += weights_[l] * acts[l];
      acts[l + 1] = (l + 1 < layers) ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
    }
    const auto a = static_cast<Eigen::Index>(actions[i]);
    const double out = acts[layers](a);
    loss += (targets[i] - out) * (targets[i] - out);
    const double d_out = output_delta(out, targets[i]) * scale;
    Eigen::VectorXd delta;
    if (layers > 1) {
      delta = weights_[layers - 1].row(a).transpose() * d_out;
      delta.array() *= (acts[layers - 1].array() > 0.0).cast<double>();
    }
    gw[layers - 1].row(a) += d_out * acts[layers - 1].transpose();
    gb[layers - 1](a) += d_out;
    for (std::size_t l = layers - 1; l-- > 0;) {
      Eigen::VectorXd next;
      if (l > 0) {
        next.noalias() = weights_[l].transpose() * delta;
        next.array() *= (acts[l].array() > 0.0).cast<double>();
      }
      gw[l].noalias() += delta * acts[l].transpose();
      gb[l] += delta;
      delta = std::move(next);
    }
  }
  if (optimizer_ == Optimizer::adam) {
    beta1_pow_ *= kBeta1;
    beta2_pow_ *= kBeta2;
    for (std::size_t l = 0; l < layers; ++l) apply_update(l, gw[l], gb[l]);
  } else {
    for (std::size_t l = 0; l < layers; ++l) {
      weights_[l] -= learning_rate_ * gw[l];
      biases_[l] -= learning_rate_ * gb[l];
    }
  }
  return loss * scale;
}

void Mlp::set_optimizer(Optimizer opt) {
  optimizer_ = opt;
  mw_.clear();
  vw_.clear();
  mb_.clear();
  vb_.clear();
  beta1_pow_ = beta2_pow_ = 1.0;
  if (opt != Optimizer::adam) return;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    mw_.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    vw_.push_back(mw_.back());
    mb_.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
    vb_.push_back(mb_.back());
  }
}

void Mlp::apply_update(std::size_t l, const Eigen::MatrixXd& gw, const Eigen::VectorXd& gb) {
  const double c1 = 1.0 / (1.0 - beta1_pow_);
  const double c2 = 1.0 / (1.0 - beta2_pow_);
  mw_[l] = kBeta1 * mw_[l] + (1.0 - kBeta1) * gw;
  vw_[l] = kBeta2 * vw_[l] + (1.0 - kBeta2) * gw.cwiseProduct(gw);
  mb_[l] = kBeta1 * mb_[l] + (1.0 - kBeta1) * gb;
  vb_[l] = kBeta2 * vb_[l] + (1.0 - kBeta2) * gb.cwiseProduct(gb);
  weights_[l].array() -=
      learning_rate_ * (mw_[l].array() * c1) / ((vw_[l].array() * c2).sqrt() + kAdamEps);
  biases_[l].array() -=
      learning_rate_ * (mb_[l].array() * c1) / ((vb_[l].array() * c2).sqrt() + kAdamEps);
}

bool Mlp::all_finite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

bool operator==(const Mlp& a, const Mlp& b) {
  if (a.sizes_ != b.sizes_) return false;
  for (std::size_t l = 0; l < a.weights_.size(); ++l) {
    if (a.weights_[l] != b.weights_[l] || a.biases_[l] != b.biases_[l]) return false;
  }
  return true;
}

void Mlp::save(std::ostream& out) const {
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << "layers " << sizes_.size();
  for (auto s : sizes_) out << ' ' << s;
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "learning_rate " << learning_rate_ << '\n';
  out << "grad_clip " << grad_clip_ << '\n';
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << w(r, c);
      out << '\n';
    }
    for (Eigen::Index r = 0; r < biases_[l].size(); ++r) out << (r ? " " : "") << biases_[l](r);
    out << '\n';
  }
}

Mlp Mlp::load(std::istream& in) {
  auto fail = [](const std::string& what) {
    throw std::runtime_error("Mlp::load: malformed checkpoint (" + what + ")");
  };
  std::string magic, key;
  int version = 0;
  if (!(in >> magic >> version) || magic != kCheckpointMagic) fail("magic");
  if (version != kCheckpointVersion) fail("unsupported version");
  std::size_t count = 0;
  if (!(in >> key >> count) || key != "layers" || count < 2) fail("layers");
  std::vector<std::size_t> sizes(count);
  for (auto& s : sizes) {
    if (!(in >> s) || s == 0) fail("layer size");
  }
  double lr = 0.0, clip = 0.0;
  if (!(in >> key >> lr) || key != "learning_rate") fail("learning_rate");
  if (!(in >> key >> clip) || key != "grad_clip") fail("grad_clip");
  Mlp net = zeros(sizes, lr);
  net.grad_clip_ = clip;
  for (std::size_t l = 0; l < net.weights_.size(); ++l) {
    auto& w = net.weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        if (!(in >> w(r, c))) fail("weights");
    for (Eigen::Index r = 0; r < net.biases_[l].size(); ++r)
      if (!(in >> net.biases_[l](r))) fail("biases");
  }
  return net;
}

}  // namespace fogcache

#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fogcache/errors.hpp"
#include "fogcache/neural.hpp"
#include "oracles.hpp"

using namespace fogcache;

namespace {

std::vector<double> random_input(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
  return x;
}

}  // namespace

TEST_CASE("forward pass") {
  SUBCASE("zero network outputs zeros") {
    const auto net = Mlp::zeros({3, 4, 2}, 0.1);
    const std::vector<double> x{1.0, -2.0, 3.0};
    CHECK(net.forward(x).isZero());
  }
  SUBCASE("identity linear layer") {
    auto net = Mlp::zeros({3, 3}, 0.1);
    net.weights(0).setIdentity();
    const std::vector<double> x{0.5, -1.5, 2.0};
    const auto y = net.forward(x);
    for (int i = 0; i < 3; ++i) CHECK(y(i) == x[static_cast<std::size_t>(i)]);
  }
  SUBCASE("hand-set 2-2-1 network") {
    auto net = Mlp::zeros({2, 2, 1}, 0.1);
    net.weights(0) << 1.0, -1.0, 0.5, 2.0;
    net.biases(0) << 0.0, -1.0;
    net.weights(1) << 3.0, -2.0;
    net.biases(1) << 0.25;
    // x = (1, 2): hidden pre-activations (-1, 3.5) -> ReLU (0, 3.5); out = -7 + 0.25.
    const std::vector<double> x{1.0, 2.0};
    CHECK(net.forward(x)(0) == doctest::Approx(-6.75));
  }
  SUBCASE("shape mismatch") {
    const auto net = Mlp::zeros({3, 2}, 0.1);
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(net.forward(x), ShapeError);
  }
  SUBCASE("pure") {
    Rng rng = make_stream(1, Stream::init);
    const Mlp net({4, 8, 3}, 0.01, rng);
    const auto x = random_input(rng, 4);
    CHECK(net.forward(x) == net.forward(x));
  }
}

TEST_CASE("initialization bounds") {
  Rng rng = make_stream(2, Stream::init);
  const Mlp net({6, 64, 64, 6}, 0.001, rng);
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.layer_sizes()[l]));
    CHECK(net.weights(l).cwiseAbs().maxCoeff() <= bound);
    CHECK(net.biases(l).cwiseAbs().maxCoeff() <= bound);
  }
}

TEST_CASE("backprop agrees with central finite differences") {
  Rng rng = make_stream(3, Stream::init);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> sizes{1 + uniform_index(rng, 6)};
    const std::size_t hidden = uniform_index(rng, 3);
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(1 + uniform_index(rng, 16));
    sizes.push_back(1 + uniform_index(rng, 5));
    const Mlp net(sizes, 0.01, rng);
    const auto x = random_input(rng, sizes.front());
    const std::size_t action = uniform_index(rng, sizes.back());
    const double target = 4.0 * uniform01(rng) - 2.0;
    CHECK(oracle::max_gradient_error(net, x, action, target) < 1e-5);
  }
}

TEST_CASE("train step") {
  Rng rng = make_stream(4, Stream::init);
  SUBCASE("target equal to the output leaves parameters unchanged") {
    Mlp net({3, 5, 2}, 0.1, rng);
    const auto x = random_input(rng, 3);
    const auto before = net;
    const double q = net.forward(x)(1);
    CHECK(net.train_step(x, 1, q) == 0.0);
    CHECK(net == before);
  }
  SUBCASE("repeated steps on one sample converge on a one-layer net") {
    Mlp net({3, 1}, 0.05, rng);
    const std::vector<double> x{0.3, -0.7, 0.5};
    double prev = net.train_step(x, 0, 2.5);
    double loss = prev;
    int steps = 1;
    for (; steps < 10000 && loss >= 1e-6; ++steps) {
      loss = net.train_step(x, 0, 2.5);
      CHECK(loss <= prev);
      prev = loss;
    }
    CHECK(loss < 1e-6);
  }
  SUBCASE("only the selected output's error matters") {
    Mlp a({4, 6, 3}, 0.1, rng);
    Mlp b = a;
    const auto x = random_input(rng, 4);
    const auto ga = a.gradient(x, 2, 0.7);
    const auto gb = b.gradient(x, 2, 0.7);
    a.train_step(x, 2, 0.7);
    b.train_step(x, 2, 0.7);
    CHECK(a == b);
    for (std::size_t l = 0; l < ga.weights.size(); ++l) CHECK(ga.weights[l] == gb.weights[l]);
    const auto g = a.gradient(x, 2, 0.7);
    CHECK(g.weights.back().row(0).isZero());
    CHECK(g.weights.back().row(1).isZero());
  }
  SUBCASE("non-finite target") {
    Mlp net({2, 2}, 0.1, rng);
    const std::vector<double> x{1.0, 1.0};
    const auto before = net;
    CHECK_THROWS_AS(net.train_step(x, 0, std::nan("")), TrainingError);
    CHECK_THROWS_AS(net.train_step(x, 0, INFINITY), TrainingError);
    CHECK(net == before);
  }
  SUBCASE("SGD step matches the analytic gradient") {
    Mlp net({3, 4, 2}, 0.01, rng);
    const auto x = random_input(rng, 3);
    const auto g = net.gradient(x, 0, 1.0);
    auto expected = net;
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      expected.weights(l) -= 0.01 * g.weights[l];
      expected.biases(l) -= 0.01 * g.biases[l];
    }
    net.train_step(x, 0, 1.0);
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      CHECK((net.weights(l) - expected.weights(l)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("gradient clipping bounds the output error signal") {
    Mlp net({2, 1}, 1.0, rng);
    net.set_grad_clip(1.0);
    const std::vector<double> x{1.0, 0.0};
    const double w = net.weights(0)(0, 0);
    net.train_step(x, 0, 1e6);
    CHECK(net.weights(0)(0, 0) == doctest::Approx(w + 1.0));
  }
}

TEST_CASE("batch step") {
  Rng rng = make_stream(5, Stream::init);
  Mlp net({3, 6, 2}, 0.05, rng);
  std::vector<std::vector<double>> xs;
  std::vector<std::size_t> as;
  std::vector<double> ts;
  for (int i = 0; i < 8; ++i) {
    xs.push_back(random_input(rng, 3));
    as.push_back(uniform_index(rng, 2));
    ts.push_back(uniform01(rng));
  }
  SUBCASE("SGD batch step applies the mean gradient") {
    auto expected = net;
    std::vector<Eigen::MatrixXd> gw;
    std::vector<Eigen::VectorXd> gb;
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      gw.push_back(Eigen::MatrixXd::Zero(net.weights(l).rows(), net.weights(l).cols()));
      gb.push_back(Eigen::VectorXd::Zero(net.biases(l).size()));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto g = net.gradient(xs[i], as[i], ts[i]);
      loss += g.loss / 8.0;
      for (std::size_t l = 0; l < net.n_layers(); ++l) {
        gw[l] += g.weights[l] / 8.0;
        gb[l] += g.biases[l] / 8.0;
      }
    }
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      expected.weights(l) -= 0.05 * gw[l];
      expected.biases(l) -= 0.05 * gb[l];
    }
    CHECK(net.train_batch(xs, as, ts) == doctest::Approx(loss).epsilon(1e-12));
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      CHECK((net.weights(l) - expected.weights(l)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  SUBCASE("Adam reduces the batch loss") {
    net.set_optimizer(Optimizer::adam);
    const double first = net.train_batch(xs, as, ts);
    double last = first;
    for (int i = 0; i < 500; ++i) last = net.train_batch(xs, as, ts);
    CHECK(last < 0.1 * first);
    CHECK(net.all_finite());
  }
  SUBCASE("Adam first step moves every touched parameter by about the learning rate") {
    net.set_optimizer(Optimizer::adam);
    const auto before = net;
    const std::vector<std::vector<double>> x1{xs[0]};
    const std::vector<std::size_t> a1{as[0]};
    const std::vector<double> t1{ts[0] + 10.0};
    net.train_batch(x1, a1, t1);
    const auto g = before.gradient(xs[0], as[0], t1[0]);
    for (std::size_t l = 0; l < net.n_layers(); ++l)
      for (Eigen::Index i = 0; i < g.weights[l].size(); ++i) {
        const double step = before.weights(l).data()[i] - net.weights(l).data()[i];
        if (g.weights[l].data()[i] != 0.0) {
          CHECK(std::abs(step) == doctest::Approx(0.05).epsilon(1e-4));
          CHECK((step > 0) == (g.weights[l].data()[i] > 0));
        } else {
          CHECK(step == 0.0);
        }
      }
  }
  SUBCASE("a non-finite target rejects the whole batch") {
    const auto before = net;
    ts[3] = std::nan("");
    CHECK_THROWS_AS(net.train_batch(xs, as, ts), TrainingError);
    CHECK(net == before);
  }
}

TEST_CASE("target snapshot") {
  Rng rng = make_stream(6, Stream::init);
  Mlp source({3, 4, 2}, 0.1, rng);
  const auto copy = sync_target(source);
  CHECK(copy == source);
  const auto again = sync_target(source);
  CHECK(again == copy);
  const auto x = random_input(rng, 3);
  source.train_step(x, 0, 5.0);
  CHECK_FALSE(copy == source);
  CHECK(copy == again);
}

TEST_CASE("checkpoint round trip") {
  Rng rng = make_stream(7, Stream::init);
  Mlp net({5, 7, 3}, 0.003, rng);
  net.set_grad_clip(0.5);
  std::stringstream buf;
  net.save(buf);
  const auto text = buf.str();
  CHECK(text.rfind("fogcache-mlp 1\nlayers 3 5 7 3\n", 0) == 0);
  const auto back = Mlp::load(buf);
  CHECK(back == net);
  CHECK(back.learning_rate() == net.learning_rate());
  CHECK(back.grad_clip() == net.grad_clip());

  std::stringstream bad("fogcache-mlp 2\nlayers 2 1 1\n");
  CHECK_THROWS(Mlp::load(bad));
  std::stringstream truncated(text.substr(0, text.size() / 2));
  CHECK_THROWS(Mlp::load(truncated));
}

#include <gtest/gtest.h>

#include <cmath>

#include "cdrlab/errors.hpp"
#include "cdrlab/nn/adam.hpp"
#include "cdrlab/nn/mlp.hpp"
#include "oracles.hpp"

using namespace cdrlab;
using namespace cdrlab::nn;

namespace {

Mlp random_mlp(const Architecture& arch, std::uint64_t seed) {
  Mlp m(arch);
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 0.5);
  Vector flat(static_cast<Eigen::Index>(m.num_params()));
  for (auto& v : flat) v = n(rng);
  m.unflatten(flat);
  return m;
}

oracle::RefMlp to_ref(const Mlp& m) {
  oracle::RefMlp r;
  r.sizes.push_back(m.architecture().input_dim);
  for (int h : m.architecture().hidden) r.sizes.push_back(h);
  r.sizes.push_back(m.architecture().output_dim);
  for (const auto& layer : m.layers()) {
    std::vector<double> w;
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) w.push_back(layer.weight(i, j));
    r.weights.push_back(w);
    r.biases.emplace_back(layer.bias.data(), layer.bias.data() + layer.bias.size());
  }
  return r;
}

}  // namespace

TEST(Mlp, ParameterCount) {
  const Mlp m(Architecture{5, {64, 64}, 2});
  EXPECT_EQ(m.num_params(), 5u * 64 + 64 + 64 * 64 + 64 + 64 * 2 + 2);
}

TEST(Mlp, ForwardMatchesReferenceImplementation) {
  const Mlp m = random_mlp({4, {7, 5}, 3}, 11);
  const auto ref = to_ref(m);
  Rng rng(1);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(4);
    for (auto& v : x) v = n(rng);
    const Vector y = m.forward(x);
    const auto yr = ref.forward(std::vector<double>(x.data(), x.data() + 4));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(y(k), yr[static_cast<std::size_t>(k)], 1e-12);
  }
}

TEST(Mlp, BatchedForwardMatchesPerSample) {
  const Mlp m = random_mlp({3, {6}, 2}, 5);
  Matrix x = Matrix::Random(3, 9);
  const Matrix y = m.forward(x);
  for (Eigen::Index c = 0; c < 9; ++c) {
    const Vector yc = m.forward(Vector(x.col(c)));
    EXPECT_NEAR((y.col(c) - yc).norm(), 0.0, 1e-14);
  }
}

TEST(Mlp, BackwardMatchesFiniteDifferences) {
  Mlp m = random_mlp({3, {5, 4}, 2}, 9);
  const Matrix x = Matrix::Random(3, 6);
  const Matrix up = Matrix::Random(2, 6);
  Tape tape;
  m.forward(x, tape);
  Vector g = Vector::Zero(static_cast<Eigen::Index>(m.num_params()));
  m.backward(tape, up, g);

  auto objective = [&](const Mlp& net) { return (up.array() * net.forward(x).array()).sum(); };
  const Vector theta = m.flatten();
  Vector fd(theta.size());
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Vector tp = theta, tm = theta;
    tp(i) += h;
    tm(i) -= h;
    Mlp a = m, b = m;
    a.unflatten(tp);
    b.unflatten(tm);
    fd(i) = (objective(a) - objective(b)) / (2 * h);
  }
  EXPECT_LE((g - fd).norm() / std::max(g.norm(), fd.norm()), 1e-7);
}

TEST(Mlp, BackwardSquaredEqualsSumOfPerSampleSquares) {
  const Mlp m = random_mlp({3, {5}, 2}, 21);
  const Matrix x = Matrix::Random(3, 7);
  const Matrix up = Matrix::Random(2, 7);
  Tape tape;
  m.forward(x, tape);
  Vector sq = Vector::Zero(static_cast<Eigen::Index>(m.num_params()));
  m.backward_squared(tape, up, sq);

  Vector expected = Vector::Zero(sq.size());
  for (Eigen::Index c = 0; c < 7; ++c) {
    Tape t1;
    m.forward(Matrix(x.col(c)), t1);
    Vector g = Vector::Zero(sq.size());
    m.backward(t1, Matrix(up.col(c)), g);
    expected += g.cwiseProduct(g);
  }
  EXPECT_LE((sq - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Mlp, FlattenRoundTrip) {
  Mlp m = random_mlp({2, {3}, 1}, 3);
  const Vector flat = m.flatten();
  Mlp other(m.architecture());
  other.unflatten(flat);
  EXPECT_EQ(other.flatten(), flat);
  // Column-major weights: the second entry is W(1, 0).
  EXPECT_EQ(flat(1), m.layers()[0].weight(1, 0));
  EXPECT_EQ(flat(6), m.layers()[0].bias(0));
  EXPECT_THROW(other.unflatten(Vector::Zero(3)), UsageError);
}

TEST(Mlp, OrthogonalInitProperties) {
  Mlp m(Architecture{5, {64, 64}, 2});
  Rng rng(0);
  m.init_orthogonal(std::sqrt(2.0), 0.01, rng);
  const Matrix& w0 = m.layers()[0].weight;  // 64 x 5: orthonormal columns scaled by gain
  EXPECT_LE((w0.transpose() * w0 - 2.0 * Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
  const Matrix& w1 = m.layers()[1].weight;
  EXPECT_LE((w1.transpose() * w1 - 2.0 * Matrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-10);
  const Matrix& w2 = m.layers()[2].weight;  // 2 x 64: orthonormal rows
  EXPECT_LE((w2 * w2.transpose() - 1e-4 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  for (const auto& l : m.layers()) EXPECT_EQ(l.bias.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mlp, RejectsWrongInputSize) {
  const Mlp m(Architecture{3, {4}, 1});
  EXPECT_THROW(m.forward(Vector(Vector::Zero(2))), UsageError);
}

TEST(Adam, FirstStepMovesBySignTimesLearningRate) {
  Adam opt(3, AdamConfig{0.1, 0.9, 0.999, 1e-8});
  Vector p(3);
  p << 1.0, 2.0, 3.0;
  Vector g(3);
  g << 0.5, -2.0, 0.0;
  opt.step(p, g);
  // m_hat = g, v_hat = g^2 after bias correction.
  EXPECT_NEAR(p(0), 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-14);
  EXPECT_NEAR(p(1), 2.0 + 0.1 * 2.0 / (2.0 + 1e-8), 1e-14);
  EXPECT_EQ(p(2), 3.0);
  EXPECT_EQ(opt.steps(), 1);
  opt.reset();
  EXPECT_EQ(opt.steps(), 0);
}

TEST(Adam, SecondStepMatchesFormula) {
  const AdamConfig c{0.01, 0.9, 0.999, 1e-5};
  Adam opt(1, c);
  Vector p = Vector::Constant(1, 0.0);
  opt.step(p, Vector::Constant(1, 1.0));
  opt.step(p, Vector::Constant(1, 3.0));
  const double m = 0.9 * 0.1 * 1.0 + 0.1 * 3.0;
  const double v = 0.999 * 0.001 * 1.0 + 0.001 * 9.0;
  const double mh = m / (1 - 0.81), vh = v / (1 - 0.999 * 0.999);
  const double first = -0.01 * 1.0 / (1.0 + 1e-5);
  EXPECT_NEAR(p(0), first - 0.01 * mh / (std::sqrt(vh) + 1e-5), 1e-14);
}

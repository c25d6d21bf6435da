#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "cdrlab/seeding.hpp"

namespace cdrlab::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Version tag of the flat parameter ordering below; stored in snapshots.
inline constexpr int kParamOrderingVersion = 1;

struct Architecture {
  int input_dim = 0;
  std::vector<int> hidden{64, 64};
  int output_dim = 0;

  bool operator==(const Architecture&) const = default;
};

struct Layer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

// Activations recorded by a batched forward pass; needed for backprop.
struct Tape {
  // inputs[l] is the input to layer l (inputs[0] is the network input,
  // inputs[l > 0] the tanh output of hidden layer l - 1).
  std::vector<Matrix> inputs;
};

// Feed-forward network with tanh hidden layers and a linear output layer.
//
// Flat parameter order: for each layer in order, the weight matrix in
// column-major order followed by the bias vector.
class Mlp {
 public:
  Mlp() = default;
  // All parameters start at zero.
  explicit Mlp(Architecture arch);

  const Architecture& architecture() const { return arch_; }
  std::size_t num_params() const { return num_params_; }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  Vector forward(const Vector& x) const;
  // Columns of `inputs` are samples.
  Matrix forward(const Matrix& inputs) const;
  Matrix forward(const Matrix& inputs, Tape& tape) const;

  // Adds d/dtheta sum_i <upstream[:, i], output[:, i]> to `grad`.
  void backward(const Tape& tape, const Matrix& upstream, Eigen::Ref<Vector> grad) const;
  // Adds sum_i (d/dtheta <upstream[:, i], output[:, i]>)^2, i.e. the per-sample
  // squared gradients summed over samples, to `grad_sq`.
  void backward_squared(const Tape& tape, const Matrix& upstream, Eigen::Ref<Vector> grad_sq) const;

  Vector flatten() const;
  void unflatten(const Eigen::Ref<const Vector>& flat);

  bool all_finite() const;

  // Orthogonal init (QR of a Gaussian matrix) with the given gains, zero biases.
  void init_orthogonal(double hidden_gain, double output_gain, Rng& rng);

 private:
  void check_input(Eigen::Index rows) const;

  Architecture arch_;
  std::vector<Layer> layers_;
  std::size_t num_params_ = 0;
};

Matrix orthogonal_matrix(Eigen::Index rows, Eigen::Index cols, double gain, Rng& rng);

}  // namespace cdrlab::nn

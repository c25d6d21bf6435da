#include "cdrlab/nn/mlp.hpp"

#include <random>
#include <string>

#include "cdrlab/errors.hpp"

namespace cdrlab::nn {

Mlp::Mlp(Architecture arch) : arch_(std::move(arch)) {
  if (arch_.input_dim < 1 || arch_.output_dim < 1) throw_usage("Mlp: input/output dims must be >= 1");
  std::vector<int> sizes;
  sizes.push_back(arch_.input_dim);
  for (int h : arch_.hidden) {
    if (h < 1) throw_usage("Mlp: hidden sizes must be >= 1");
    sizes.push_back(h);
  }
  sizes.push_back(arch_.output_dim);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    layers_.push_back({Matrix::Zero(sizes[l + 1], sizes[l]), Vector::Zero(sizes[l + 1])});
    num_params_ += static_cast<std::size_t>(sizes[l + 1]) * (sizes[l] + 1);
  }
}

void Mlp::check_input(Eigen::Index rows) const {
  if (rows != arch_.input_dim) {
    throw_usage("Mlp: input has " + std::to_string(rows) + " rows, expected " +
                std::to_string(arch_.input_dim));
  }
}

Vector Mlp::forward(const Vector& x) const {
  check_input(x.size());
  Vector h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Vector z = layers_[l].weight * h + layers_[l].bias;
    h = (l + 1 < layers_.size()) ? Vector(z.array().tanh()) : z;
  }
  return h;
}

Matrix Mlp::forward(const Matrix& inputs) const {
  Tape tape;
  return forward(inputs, tape);
}

Matrix Mlp::forward(const Matrix& inputs, Tape& tape) const {
  check_input(inputs.rows());
  tape.inputs.resize(layers_.size());
  tape.inputs[0] = inputs;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    Matrix z = layers_[l].weight * tape.inputs[l];
    z.colwise() += layers_[l].bias;
    tape.inputs[l + 1] = z.array().tanh();
  }
  const Layer& last = layers_.back();
  Matrix out = last.weight * tape.inputs.back();
  out.colwise() += last.bias;
  return out;
}

namespace {

// Offsets of each layer's weight block in the flat vector.
std::vector<Eigen::Index> layer_offsets(const std::vector<Layer>& layers) {
  std::vector<Eigen::Index> off;
  Eigen::Index o = 0;
  for (const auto& layer : layers) {
    off.push_back(o);
    o += layer.weight.size() + layer.bias.size();
  }
  return off;
}

}  // namespace

void Mlp::backward(const Tape& tape, const Matrix& upstream, Eigen::Ref<Vector> grad) const {
  if (grad.size() != static_cast<Eigen::Index>(num_params_)) throw_usage("Mlp::backward: gradient size mismatch");
  const auto off = layer_offsets(layers_);
  Matrix delta = upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const Matrix& in = tape.inputs[l];
    Eigen::Map<Matrix> gw(grad.data() + off[l], layer.weight.rows(), layer.weight.cols());
    gw.noalias() += delta * in.transpose();
    grad.segment(off[l] + layer.weight.size(), layer.bias.size()) += delta.rowwise().sum();
    if (l > 0) {
      Matrix back = layer.weight.transpose() * delta;
      delta = back.array() * (1.0 - in.array().square());
    }
  }
}

void Mlp::backward_squared(const Tape& tape, const Matrix& upstream, Eigen::Ref<Vector> grad_sq) const {
  if (grad_sq.size() != static_cast<Eigen::Index>(num_params_)) {
    throw_usage("Mlp::backward_squared: gradient size mismatch");
  }
  const auto off = layer_offsets(layers_);
  Matrix delta = upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const Matrix& in = tape.inputs[l];
    // sum_i (delta_i in_i^T) .^ 2 == (delta .^ 2) (in .^ 2)^T
    const Matrix d2 = delta.array().square();
    Eigen::Map<Matrix> gw(grad_sq.data() + off[l], layer.weight.rows(), layer.weight.cols());
    gw.noalias() += d2 * in.array().square().matrix().transpose();
    grad_sq.segment(off[l] + layer.weight.size(), layer.bias.size()) += d2.rowwise().sum();
    if (l > 0) {
      Matrix back = layer.weight.transpose() * delta;
      delta = back.array() * (1.0 - in.array().square());
    }
  }
}

Vector Mlp::flatten() const {
  Vector flat(static_cast<Eigen::Index>(num_params_));
  Eigen::Index o = 0;
  for (const auto& layer : layers_) {
    flat.segment(o, layer.weight.size()) = Eigen::Map<const Vector>(layer.weight.data(), layer.weight.size());
    o += layer.weight.size();
    flat.segment(o, layer.bias.size()) = layer.bias;
    o += layer.bias.size();
  }
  return flat;
}

void Mlp::unflatten(const Eigen::Ref<const Vector>& flat) {
  if (flat.size() != static_cast<Eigen::Index>(num_params_)) throw_usage("Mlp::unflatten: size mismatch");
  Eigen::Index o = 0;
  for (auto& layer : layers_) {
    Eigen::Map<Vector>(layer.weight.data(), layer.weight.size()) = flat.segment(o, layer.weight.size());
    o += layer.weight.size();
    layer.bias = flat.segment(o, layer.bias.size());
    o += layer.bias.size();
  }
}

bool Mlp::all_finite() const {
  for (const auto& layer : layers_) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

Matrix orthogonal_matrix(Eigen::Index rows, Eigen::Index cols, double gain, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const bool tall = rows >= cols;
  const Eigen::Index r = tall ? rows : cols;
  const Eigen::Index c = tall ? cols : rows;
  Matrix g(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) g(i, j) = n01(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(r, c);
  const Matrix rr = qr.matrixQR().topLeftCorner(c, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    if (rr(j, j) < 0.0) q.col(j) *= -1.0;
  }
  Matrix out = tall ? q : Matrix(q.transpose());
  return gain * out;
}

void Mlp::init_orthogonal(double hidden_gain, double output_gain, Rng& rng) {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const double gain = (l + 1 < layers_.size()) ? hidden_gain : output_gain;
    layers_[l].weight = orthogonal_matrix(layers_[l].weight.rows(), layers_[l].weight.cols(), gain, rng);
    layers_[l].bias.setZero();
  }
}

}  // namespace cdrlab::nn

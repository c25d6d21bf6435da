#include "cdrlab/nn/adam.hpp"

#include <cmath>

#include "cdrlab/errors.hpp"

namespace cdrlab::nn {

Adam::Adam(std::size_t size, AdamConfig config)
    : config_(config),
      m_(Vector::Zero(static_cast<Eigen::Index>(size))),
      v_(Vector::Zero(static_cast<Eigen::Index>(size))) {}

void Adam::reset() {
  m_.setZero();
  v_.setZero();
  t_ = 0;
}

void Adam::step(Eigen::Ref<Vector> params, const Vector& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) throw_usage("Adam::step: size mismatch");
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  m_ = b1 * m_ + (1.0 - b1) * grad;
  v_ = b2 * v_ + (1.0 - b2) * grad.cwiseAbs2();
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double step_size = config_.learning_rate / bc1;
  const Vector denom = (v_.array().sqrt() / std::sqrt(bc2)) + config_.epsilon;
  params.array() -= step_size * (m_.array() / denom.array());
}

}  // namespace cdrlab::nn

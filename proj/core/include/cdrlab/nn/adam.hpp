#pragma once

#include "cdrlab/nn/mlp.hpp"

namespace cdrlab::nn {

struct AdamConfig {
  double learning_rate = 2.5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-5;
};

// Adaptive-moment optimizer over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t size, AdamConfig config);

  // params -= lr * m_hat / (sqrt(v_hat) + eps)
  void step(Eigen::Ref<Vector> params, const Vector& grad);
  void reset();

  const AdamConfig& config() const { return config_; }
  long long steps() const { return t_; }

 private:
  AdamConfig config_{};
  Vector m_;
  Vector v_;
  long long t_ = 0;
};

}  // namespace cdrlab::nn

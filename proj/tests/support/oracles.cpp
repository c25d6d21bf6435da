#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat4 rot_z(double a) {
  return {{{std::cos(a), -std::sin(a), 0, 0}, {std::sin(a), std::cos(a), 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
}

// Rotation about the local y axis; positive angles tilt +x downwards.
Mat4 rot_y(double a) {
  return {{{std::cos(a), 0, std::sin(a), 0}, {0, 1, 0, 0}, {-std::sin(a), 0, std::cos(a), 0}, {0, 0, 0, 1}}};
}

Mat4 trans(double x, double y, double z) { return {{{1, 0, 0, x}, {0, 1, 0, y}, {0, 0, 1, z}, {0, 0, 0, 1}}}; }

}  // namespace

Vec3 fk_homogeneous(double l1, double l2, double base_height, double q1, double q2) {
  Mat4 t = mul(trans(0, 0, base_height), rot_z(q1));
  t = mul(t, trans(l1, 0, 0));
  t = mul(t, rot_y(q2));
  t = mul(t, trans(l2, 0, 0));
  return {t[0][3], t[1][3], t[2][3]};
}

std::vector<double> gae_double_sum(const std::vector<double>& rewards, const std::vector<double>& values,
                                   const std::vector<double>& next_values, const std::vector<std::uint8_t>& terminal,
                                   const std::vector<std::uint8_t>& episode_end, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    delta[t] = rewards[t] + gamma * (terminal[t] ? 0.0 : next_values[t]) - values[t];
  }
  std::vector<double> adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double w = 1.0;
    for (std::size_t k = t; k < n; ++k) {
      adv[t] += w * delta[k];
      if (episode_end[k]) break;
      w *= gamma * lambda;
    }
  }
  return adv;
}

double kahan_sum(std::span<const double> xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double continuity_two_pass(const std::vector<std::array<double, 2>>& actions) {
  double mx = 0.0;
  for (std::size_t t = 0; t + 1 < actions.size(); ++t) {
    const double dx = actions[t + 1][0] - actions[t][0];
    const double dy = actions[t + 1][1] - actions[t][1];
    mx = std::max(mx, dx * dx + dy * dy);
  }
  if (mx == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < actions.size(); ++t) {
    const double dx = actions[t + 1][0] - actions[t][0];
    const double dy = actions[t + 1][1] - actions[t][1];
    acc += (dx * dx + dy * dy) / mx;
  }
  return 100.0 * acc / static_cast<double>(actions.size() - 1);
}

double window_distance(const std::vector<Vec3>& positions, const Vec3& target, int horizon, bool squared) {
  double acc = 0.0;
  int count = 0;
  for (int t = horizon / 2; t <= horizon; ++t) {
    const auto& p = positions[static_cast<std::size_t>(t)];
    const double d2 = (p[0] - target[0]) * (p[0] - target[0]) + (p[1] - target[1]) * (p[1] - target[1]) +
                      (p[2] - target[2]) * (p[2] - target[2]);
    acc += squared ? d2 : std::sqrt(d2);
    ++count;
  }
  return acc / count;
}

std::vector<double> RefMlp::forward(const std::vector<double>& x) const {
  std::vector<double> h = x;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l], out = sizes[l + 1];
    std::vector<double> y(static_cast<std::size_t>(out));
    for (int i = 0; i < out; ++i) {
      double s = biases[l][static_cast<std::size_t>(i)];
      for (int j = 0; j < in; ++j) s += weights[l][static_cast<std::size_t>(i * in + j)] * h[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = (l + 2 < sizes.size()) ? std::tanh(s) : s;
    }
    h = y;
  }
  return h;
}

std::vector<GroupStats> group_by(const std::vector<Rec>& recs) {
  std::vector<GroupStats> out;
  for (const auto& r : recs) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const GroupStats& g) {
      return g.strategy == r.strategy && g.ordering == r.ordering && g.env == r.env;
    });
    if (seen) continue;
    GroupStats g{r.strategy, r.ordering, r.env};
    double sum = 0.0;
    for (const auto& s : recs) {
      if (s.strategy == r.strategy && s.ordering == r.ordering && s.env == r.env) {
        sum += s.value;
        ++g.n;
      }
    }
    g.mean = sum / static_cast<double>(g.n);
    double var = 0.0;
    for (const auto& s : recs) {
      if (s.strategy == r.strategy && s.ordering == r.ordering && s.env == r.env) {
        var += (s.value - g.mean) * (s.value - g.mean);
      }
    }
    g.std = std::sqrt(var / static_cast<double>(g.n));
    out.push_back(g);
  }
  return out;
}

}  // namespace oracle

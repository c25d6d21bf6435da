#include "cdrlab/ppo/gae.hpp"

#include <cmath>
#include <vector>

#include "cdrlab/errors.hpp"

namespace cdrlab::ppo {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const double> next_values, std::span<const std::uint8_t> terminal,
                      std::span<const std::uint8_t> episode_end, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || next_values.size() != n || terminal.size() != n || episode_end.size() != n) {
    throw_usage("compute_gae: arrays must have equal length");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!std::isfinite(rewards[t]) || !std::isfinite(values[t]) || !std::isfinite(next_values[t])) {
      throw InputError("compute_gae: non-finite reward or value at step " + std::to_string(t));
    }
  }
  GaeResult out{nn::Vector(static_cast<Eigen::Index>(n)), nn::Vector(static_cast<Eigen::Index>(n))};
  double next_adv = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double not_terminal = terminal[i] ? 0.0 : 1.0;
    const double chain = (episode_end[i] || i + 1 == n) ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_values[i] * not_terminal - values[i];
    next_adv = delta + gamma * lambda * chain * next_adv;
    const auto e = static_cast<Eigen::Index>(i);
    out.advantages(e) = next_adv;
    out.returns(e) = next_adv + values[i];
  }
  return out;
}

void compute_advantages(RolloutBuffer& buffer, double gamma, double lambda) {
  const std::size_t n = buffer.size();
  std::vector<std::uint8_t> ends(n);
  for (std::size_t t = 0; t < n; ++t) ends[t] = buffer.episode_end(t) ? 1 : 0;
  auto span_of = [n](const nn::Vector& v) { return std::span<const double>(v.data(), n); };
  GaeResult g = compute_gae(span_of(buffer.rewards), span_of(buffer.value_old), span_of(buffer.next_values),
                            buffer.terminal, ends, gamma, lambda);
  buffer.advantages = std::move(g.advantages);
  buffer.returns = std::move(g.returns);
}

}  // namespace cdrlab::ppo

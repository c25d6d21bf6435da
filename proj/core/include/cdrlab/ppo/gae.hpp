#pragma once

#include <cstdint>
#include <span>

#include "cdrlab/nn/mlp.hpp"
#include "cdrlab/ppo/rollout.hpp"

namespace cdrlab::ppo {

struct GaeResult {
  nn::Vector advantages;
  nn::Vector returns;
};

// delta_t = r_t + gamma * next_value_t * (1 - terminal_t) - value_t
// A_t     = delta_t + gamma * lambda * (1 - end_t) * A_{t+1}
// where end_t marks any episode boundary (termination or truncation), so a
// truncated step bootstraps from next_value_t but does not chain into the
// next episode. The final step never chains.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const double> next_values, std::span<const std::uint8_t> terminal,
                      std::span<const std::uint8_t> episode_end, double gamma, double lambda);

// Fills buffer.advantages and buffer.returns.
void compute_advantages(RolloutBuffer& buffer, double gamma, double lambda);

}  // namespace cdrlab::ppo

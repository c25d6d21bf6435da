#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cdrlab/continual/continual.hpp"
#include "cdrlab/nn/policy.hpp"

namespace cdrlab::io {

// Binary container for models and continual-learning state. Layout (all
// integers and doubles little-endian):
//
//   magic    8 bytes  "CDRSNAP\0"
//   version  u32      kSnapshotVersion
//   count    u32      number of sections
//   section  name[16] (NUL padded) | u64 payload size | payload
//
// See docs/snapshot_format.md for the payload of each section.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotMeta {
  long long timestep = 0;
  int phases_completed = 0;
  bool phase_trained = false;
  long long next_eval_mark = 0;
};

struct Snapshot {
  SnapshotMeta meta;
  nn::GaussianPolicy policy;
  std::optional<nn::Critic> critic;
  continual::ContinualState continual;
};

std::string encode_snapshot(const Snapshot& snap);
Snapshot decode_snapshot(std::string_view bytes);  // FormatError on malformed input

// Writes through a temporary file and renames it into place.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace cdrlab::io

// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sscl/membank.hpp"
#include "sscl/nn.hpp"
#include "sscl/optim.hpp"

namespace sscl {

// Versioned checkpoint container: header, payload (meta + named parameter
// matrices + optimizer state + optional bank), CRC-32 trailer.
struct CheckpointMeta {
  std::string task;  // "classify" or "segment"
  std::uint64_t plan_hash = 0;
  std::int32_t epoch = 0;  // next epoch to run
  std::int32_t stage = 0;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const std::vector<Param*>& params, const Optimizer* opt,
                     const ClassMemoryBank* bank);

// Restores parameter values (names and shapes must match), optimizer state
// and bank when present. Throws DataError on version mismatch or corruption.
CheckpointMeta load_checkpoint(const std::string& path,
                               const std::vector<Param*>& params, Optimizer* opt,
                               std::optional<ClassMemoryBank>* bank);

}  // namespace sscl

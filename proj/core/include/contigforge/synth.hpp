#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contigforge/read_store.hpp"

namespace contigforge {

/// Uniform random reference sequence, deterministic under the seed.
std::string synth_genome(std::int64_t length, std::uint64_t seed);

/// True placement of a sampled read, kept for oracle checks.
struct ReadLayout {
  std::int64_t id = 0;
  std::int64_t start = 0;
  bool forward = true;
};

struct SynthReads {
  ReadStore store;
  std::vector<ReadLayout> layout;
};

/// Error-free reads sampled uniformly with random strand; the read count is
/// round(length * coverage / read_len).
SynthReads synth_reads(const std::string& reference, std::int64_t read_len, double coverage,
                       std::uint64_t seed);

}  // namespace contigforge

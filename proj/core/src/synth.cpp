#include "contigforge/synth.hpp"

#include <cmath>
#include <random>

namespace contigforge {

std::string synth_genome(std::int64_t length, std::uint64_t seed) {
  if (length < 1) throw ConfigError("genome length must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 3);
  constexpr char bases[] = {'A', 'C', 'G', 'T'};
  std::string genome(length, 'A');
  for (auto& b : genome) b = bases[pick(rng)];
  return genome;
}

SynthReads synth_reads(const std::string& reference, std::int64_t read_len, double coverage,
                       std::uint64_t seed) {
  const std::int64_t length = static_cast<std::int64_t>(reference.size());
  if (read_len < 1 || read_len >= length) {
    throw ConfigError("read length must be in [1, genome length)");
  }
  if (coverage < 1.0) throw ConfigError("coverage must be >= 1");

  const std::int64_t n_reads =
      std::llround(static_cast<double>(length) * coverage / static_cast<double>(read_len));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::int64_t> start_at(0, length - read_len);
  std::uniform_int_distribution<int> strand(0, 1);

  SynthReads out;
  for (std::int64_t id = 0; id < n_reads; ++id) {
    const std::int64_t start = start_at(rng);
    const bool forward = strand(rng) == 0;
    std::string seq = reference.substr(start, read_len);
    if (!forward) seq = reverse_complement(seq);
    out.store.append(id, "read_" + std::to_string(id), seq);
    out.layout.push_back({id, start, forward});
  }
  return out;
}

}  // namespace contigforge

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "contigforge/grid.hpp"

namespace contigforge {

/// Scaled-down assembly quality metrics: completeness is the percentage of
/// reference positions covered by at least one exactly-placed contig, and a
/// contig matching no reference interval on either strand counts as
/// misassembled.
struct QualityReport {
  double completeness = 0.0;
  std::int64_t longest_contig = 0;
  std::int64_t contig_count = 0;
  std::int64_t misassembled = 0;
  std::map<std::string, double> stage_seconds;
  std::map<std::string, std::uint64_t> stage_bytes;
  std::uint64_t total_bytes = 0;
  std::uint64_t total_msgs = 0;
};

QualityReport evaluate(const std::vector<std::string>& contigs, const std::string& reference);

}  // namespace contigforge

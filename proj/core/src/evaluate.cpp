#include "contigforge/evaluate.hpp"

#include <algorithm>

#include "contigforge/read_store.hpp"

namespace contigforge {

namespace {

/// Mark every position covered by an exact occurrence of `needle`.
bool mark_occurrences(const std::string& reference, const std::string& needle,
                      std::vector<char>& covered) {
  bool found = false;
  for (std::size_t at = reference.find(needle); at != std::string::npos;
       at = reference.find(needle, at + 1)) {
    found = true;
    std::fill(covered.begin() + at, covered.begin() + at + needle.size(), 1);
  }
  return found;
}

}  // namespace

QualityReport evaluate(const std::vector<std::string>& contigs, const std::string& reference) {
  QualityReport report;
  report.contig_count = static_cast<std::int64_t>(contigs.size());

  std::vector<char> covered(reference.size(), 0);
  for (const std::string& contig : contigs) {
    report.longest_contig =
        std::max(report.longest_contig, static_cast<std::int64_t>(contig.size()));
    bool placed = false;
    if (!contig.empty() && contig.size() <= reference.size()) {
      placed = mark_occurrences(reference, contig, covered);
      placed |= mark_occurrences(reference, reverse_complement(contig), covered);
    }
    if (!placed) report.misassembled += 1;
  }

  if (!reference.empty()) {
    const std::int64_t hit = std::count(covered.begin(), covered.end(), 1);
    report.completeness = 100.0 * static_cast<double>(hit) / static_cast<double>(reference.size());
  }
  return report;
}

}  // namespace contigforge

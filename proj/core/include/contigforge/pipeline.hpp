#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contigforge/contig.hpp"
#include "contigforge/evaluate.hpp"
#include "contigforge/read_store.hpp"

namespace contigforge {

struct PipelineConfig {
  int k = 31;
  std::int64_t min_overlap = 500;  // t
  std::int64_t fuzz = 10;
  int grid_p = 1;
  std::uint64_t max_msg_bytes = Grid::kDefaultMaxMsgBytes;
  std::uint64_t seed = 0;
  int max_kmer_freq = 8;
  int tr_max_iters = 64;
  bool emit_singletons = false;

  std::string input_fasta;
  std::string reference_fasta;  // optional; enables quality metrics
  std::string string_graph;     // optional bypass TSV (u v dir overhang pre post)
  std::string out_contigs;
  std::string report_json;
  std::string ledger_tsv;
  std::string chain_dump;
  std::string matrix_dump;  // string matrix S in Matrix Market form

  /// Throws ConfigError on invalid combinations (non-square grid, even k,
  /// t < k, zero message limit).
  void validate() const;
};

struct NamedContig {
  std::string name;  // contig_<k> len=<L> reads=<q>
  std::string sequence;
  ContigChain chain;
  Rank rank = 0;  // rank that assembled it
};

struct PipelineResult {
  std::vector<NamedContig> contigs;  // ordered by smallest read id in the chain
  std::vector<std::int64_t> branch_masked;
  std::vector<std::int64_t> containment_masked;
  std::int64_t n_components = 0;
  std::int64_t singletons_emitted = 0;
  bool has_quality = false;  // metrics computed against a reference
  QualityReport report;
  std::string report_text;  // human-readable summary
};

/// Alg. 1 end to end over the virtual grid. `reference` turns on quality
/// metrics. Stage failures rethrow as StageError carrying the stage name.
PipelineResult run_pipeline(const PipelineConfig& config, const ReadStore& reads,
                            const std::string* reference = nullptr);

/// File-driven variant: loads reads (and reference when set), runs, and
/// writes every configured output.
PipelineResult run_pipeline_files(const PipelineConfig& config);

/// String-graph TSV: one edge per line `u v dir overhang pre post`,
/// '#' comments allowed. Missing mirror edges are synthesized; when both
/// directions are present they must be exact mirrors.
DistSparseMatrix<EdgeLabel> load_string_graph(const std::string& path, Grid& grid,
                                              const ReadStore& store);

void write_string_graph(std::ostream& os, const DistSparseMatrix<EdgeLabel>& s);

/// Matrix Market coordinate dump (1-based) with the label fields as extra
/// columns: row col direction overhang pre post.
void write_matrix_market(std::ostream& os, const DistSparseMatrix<EdgeLabel>& s);

std::string report_to_json(const PipelineConfig& config, const PipelineResult& result);

}  // namespace contigforge

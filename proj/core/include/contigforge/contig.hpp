#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "contigforge/dist_matrix.hpp"
#include "contigforge/edge_label.hpp"
#include "contigforge/read_store.hpp"

namespace contigforge {

struct BranchRemoval {
  DistSparseMatrix<EdgeLabel> linear;  // L: max degree <= 2
  std::vector<std::int64_t> masked;    // branching vertex ids, ascending
};

/// Mask every vertex of degree >= 3: degrees via a row reduction plus
/// reduce-scatter, branch ids exchanged grid-wide, rows and columns
/// cleared in place (indexing preserved).
BranchRemoval branch_removal(const DistSparseMatrix<EdgeLabel>& s);

/// Distributed map read id -> contig id; NONE for isolated vertices.
/// Contig ids are dense 0..n_contigs-1 after relabeling (ordered by the
/// smallest vertex id in each component, which keeps them independent of
/// the grid size).
struct ComponentVector {
  static constexpr std::int64_t kNone = -1;
  VectorLayout layout;
  std::vector<std::vector<std::int64_t>> chunks;  // per-rank slices of the map
  std::int64_t n_contigs = 0;

  std::vector<std::int64_t> gather() const;
  std::int64_t label_of(std::int64_t vertex) const;
};

/// Awerbuch-Shiloach style iterative hooking and shortcutting over the
/// distributed matrix, with a sparse frontier of active vertices.
ComponentVector connected_components(const DistSparseMatrix<EdgeLabel>& l);

/// size[c] = number of reads labeled c; local counts followed by a
/// reduce-scatter onto a block distribution by contig id. Returns the
/// per-rank owned slices; `gathered` is the concatenation.
struct ContigSizes {
  BlockPartition ownership;  // contig id -> owning rank
  std::vector<std::vector<std::int64_t>> slices;
  std::vector<std::int64_t> gathered;
};
ContigSizes contig_sizes(Grid& grid, const ComponentVector& v);

/// Longest-processing-time greedy assignment of contigs to ranks, run on
/// one rank and broadcast. Ties: larger size first, then smaller contig
/// id; least-loaded rank, then lower rank index.
struct AssignmentVector {
  std::vector<Rank> par;                 // contig id -> rank
  std::vector<std::int64_t> rank_load;   // total assigned size per rank
};

/// The greedy core, usable for any positive bin count.
AssignmentVector lpt_assign(const std::vector<std::int64_t>& sizes, int bins);

/// Grid version: size slices gathered to rank 0, par broadcast back.
AssignmentVector lpt_partition(Grid& grid, const std::vector<std::int64_t>& sizes);

/// Per-rank re-indexed CSC matrix plus the local -> global vertex map.
struct LocalSubgraph {
  CscMatrix<EdgeLabel> matrix;
  std::vector<std::int64_t> global_ids;  // ascending; local id = position
};

/// The induced-subgraph redistribution: destination knowledge spreads by a
/// row allgather followed by the transpose exchange, then every edge whose
/// endpoints map to the same rank ships there as an (u, v, label) triple in
/// a personalized all-to-all. Throws InconsistentAssignment when an edge's
/// endpoints disagree.
std::vector<LocalSubgraph> induced_subgraph(const DistSparseMatrix<EdgeLabel>& l,
                                            const ComponentVector& v,
                                            const AssignmentVector& par);

/// One assembled walk r, c1, ..., c_{q-2}, r' with per-vertex orientation
/// and per-step labels.
struct ContigChain {
  std::vector<std::int64_t> reads;  // global ids in walk order
  std::vector<bool> forward;        // orientation per vertex
  std::vector<EdgeLabel> edges;     // q-1 steps
  bool circular = false;
};

struct AssembledContig {
  ContigChain chain;
  std::string sequence;
};

/// Linear walk over the local CSC matrix: scan for unvisited degree-1
/// roots in ascending global id order, walk to the opposite root, and
/// concatenate the read slices dictated by pre/post. Components where
/// every vertex has degree 2 are cycles; they are broken at their smallest
/// global id and emitted with the circular flag.
std::vector<AssembledContig> local_assembly(const LocalSubgraph& local, const ReadStore& store);

}  // namespace contigforge

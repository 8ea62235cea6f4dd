#pragma once

#include <unordered_set>
#include <vector>

#include "contigforge/dist_matrix.hpp"
#include "contigforge/edge_label.hpp"
#include "contigforge/kmer_index.hpp"
#include "contigforge/read_store.hpp"

namespace contigforge {

/// Extend each candidate seed (a shared k-mer of length seed_k) to the
/// maximal exact match and keep the pair iff it is a suffix-prefix overlap
/// of length >= min_overlap reaching one end of each read in compatible
/// orientations (or a containment, which is kept for the containment prune
/// to act on). Surviving nonzeros carry EdgeLabels; the matrix is
/// structurally symmetric with mirrored labels.
DistSparseMatrix<EdgeLabel> align_filter(const DistSparseMatrix<OverlapCandidate>& candidates,
                                         const ReadStore& store, std::int64_t min_overlap,
                                         int seed_k);

struct ContainmentPrune {
  DistSparseMatrix<EdgeLabel> graph;
  std::vector<std::int64_t> masked;  // contained read ids, ascending
};

/// Mask every read whose overlap spans its full length inside another read
/// (rows and columns cleared, indexing preserved). Exact duplicate pairs
/// keep the smaller id.
ContainmentPrune prune_contained(const DistSparseMatrix<EdgeLabel>& r, const ReadStore& store);

/// Iteratively remove every edge (i,k) explained by a valid two-hop walk
/// i -> j -> k with overhang(i,j) + overhang(j,k) <= overhang(i,k) + fuzz,
/// until a fixpoint. Throws NonConvergence past max_iters.
DistSparseMatrix<EdgeLabel> transitive_reduction(const DistSparseMatrix<EdgeLabel>& r,
                                                 std::int64_t fuzz, int max_iters = 64);

}  // namespace contigforge

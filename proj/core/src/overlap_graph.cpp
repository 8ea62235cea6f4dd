#include "contigforge/overlap_graph.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace contigforge {

namespace {

/// Maximal exact extension of a shared-kmer seed.
OverlapCoords extend_seed(std::string_view u, std::string_view v, std::int64_t pos_u,
                          std::int64_t pos_v, bool same_strand, int k) {
  const std::int64_t lu = static_cast<std::int64_t>(u.size());
  const std::int64_t lv = static_cast<std::int64_t>(v.size());
  if (same_strand) {
    std::int64_t bu = pos_u, bv = pos_v;
    std::int64_t eu = pos_u + k - 1, ev = pos_v + k - 1;
    while (bu > 0 && bv > 0 && u[bu - 1] == v[bv - 1]) --bu, --bv;
    while (eu + 1 < lu && ev + 1 < lv && u[eu + 1] == v[ev + 1]) ++eu, ++ev;
    return {bu, eu, bv, ev, true};
  }
  // u[pos_u .. pos_u+k-1] matches the reverse complement of
  // v[pos_v .. pos_v+k-1]; extending u rightwards extends v leftwards.
  std::int64_t bu = pos_u, eu = pos_u + k - 1;
  std::int64_t bv = pos_v, ev = pos_v + k - 1;
  while (eu + 1 < lu && bv > 0 && u[eu + 1] == complement_base(v[bv - 1])) ++eu, --bv;
  while (bu > 0 && ev + 1 < lv && u[bu - 1] == complement_base(v[ev + 1])) --bu, ++ev;
  return {bu, eu, bv, ev, false};
}

/// Proper overlaps reach one end of each read in compatible orientations.
bool is_proper(const OverlapCoords& o, std::int64_t lu, std::int64_t lv) {
  const bool u_suffix = o.src_end == lu - 1;
  const bool u_prefix = o.src_begin == 0;
  const bool v_suffix = o.dst_end == lv - 1;
  const bool v_prefix = o.dst_begin == 0;
  if (o.same_strand) return (u_suffix && v_prefix) || (u_prefix && v_suffix);
  return (u_suffix && v_suffix) || (u_prefix && v_prefix);
}

/// Every k-mer of a read as (code, position), sorted by code: one list for
/// the forward codes and one keyed by the reverse-complement codes, so
/// opposite-strand matches are a plain merge.
struct SeedList {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> fwd, rc;
  // Every stride-th forward position: enough to hit any overlap window of
  // at least `stride` k-mers, at a fraction of the merge cost.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> strided;
};

SeedList make_seed_list(std::string_view seq, int k, std::uint32_t stride) {
  SeedList out;
  if (static_cast<std::int64_t>(seq.size()) < k) return out;
  const std::size_t count = seq.size() - k + 1;
  out.fwd.reserve(count);
  out.rc.reserve(count);
  const std::uint64_t mask = (1ull << (2 * k)) - 1;
  const int high_shift = 2 * (k - 1);
  std::uint64_t code = pack_kmer(seq.substr(0, k));
  std::uint64_t rc = reverse_complement_code(code, k);
  for (std::uint32_t p = 0;; ++p) {
    out.fwd.emplace_back(code, p);
    out.rc.emplace_back(rc, p);
    if (p % stride == 0) out.strided.emplace_back(code, p);
    if (p + 1 == count) break;
    std::uint64_t next = 0;
    switch (seq[p + k]) {
      case 'C': next = 1; break;
      case 'G': next = 2; break;
      case 'T': next = 3; break;
    }
    code = ((code << 2) | next) & mask;
    rc = (rc >> 2) | ((next ^ 3) << high_shift);
  }
  std::sort(out.fwd.begin(), out.fwd.end());
  std::sort(out.rc.begin(), out.rc.end());
  std::sort(out.strided.begin(), out.strided.end());
  return out;
}

/// Best acceptable overlap between two reads: every shared-kmer seed pair
/// is extended to its maximal exact match (a single seed can sit in a
/// repeat outside the true overlap, so one representative is not enough);
/// containments and proper overlaps of length >= min_overlap compete by
/// (length desc, coordinates asc). Seeds falling inside an extension
/// already made on the same (anti)diagonal are skipped.
std::optional<OverlapCoords> best_overlap(std::string_view u, std::string_view v,
                                          const SeedList& u_seeds, const SeedList& v_seeds,
                                          std::int64_t min_overlap, int k) {
  const std::int64_t lu = static_cast<std::int64_t>(u.size());
  const std::int64_t lv = static_cast<std::int64_t>(v.size());

  std::optional<OverlapCoords> best;
  auto consider = [&](const OverlapCoords& o) {
    const bool u_full = o.src_begin == 0 && o.src_end == lu - 1;
    const bool v_full = o.dst_begin == 0 && o.dst_end == lv - 1;
    if (overlap_length(o) < min_overlap) return;
    if (!u_full && !v_full && !is_proper(o, lu, lv)) return;
    if (!best || overlap_length(o) > overlap_length(*best) ||
        (overlap_length(o) == overlap_length(*best) &&
         std::tie(o.src_begin, o.dst_begin) < std::tie(best->src_begin, best->dst_begin))) {
      best = o;
    }
  };

  // (diagonal, extended source interval) of every extension made so far;
  // a handful of entries at most, linear scan beats a map.
  struct Done {
    std::int64_t key, begin, end;
  };
  std::vector<Done> done;
  auto already_covered = [&](std::int64_t key, std::int64_t pu) {
    for (const auto& d : done) {
      if (d.key == key && pu >= d.begin && pu + k - 1 <= d.end) return true;
    }
    return false;
  };

  auto sweep = [&](const auto& lhs, const auto& rhs, bool same_strand) {
    done.clear();
    std::size_t i = 0, j = 0;
    while (i < lhs.size() && j < rhs.size()) {
      if (lhs[i].first < rhs[j].first) {
        ++i;
      } else if (rhs[j].first < lhs[i].first) {
        ++j;
      } else {
        std::size_t ie = i, je = j;
        while (ie < lhs.size() && lhs[ie].first == lhs[i].first) ++ie;
        while (je < rhs.size() && rhs[je].first == rhs[j].first) ++je;
        for (std::size_t a = i; a < ie; ++a) {
          for (std::size_t b = j; b < je; ++b) {
            const std::int64_t pu = lhs[a].second;
            const std::int64_t pv = rhs[b].second;
            // One exact match keeps pu - pv (same strand) or pu + pv
            // (opposite strands, pairing u[pu+i] with v[pv+k-1-i]) fixed.
            const std::int64_t key = same_strand ? pu - pv : pu + pv;
            if (already_covered(key, pu)) continue;
            const OverlapCoords o = extend_seed(u, v, pu, pv, same_strand, k);
            done.push_back({key, o.src_begin, o.src_end});
            consider(o);
          }
        }
        i = ie;
        j = je;
      }
    }
  };
  sweep(u_seeds.strided, v_seeds.fwd, true);
  sweep(u_seeds.strided, v_seeds.rc, false);
  return best;
}

}  // namespace

DistSparseMatrix<EdgeLabel> align_filter(const DistSparseMatrix<OverlapCandidate>& candidates,
                                         const ReadStore& store, std::int64_t min_overlap,
                                         int seed_k) {
  Grid& g = candidates.grid();
  g.ledger().set_stage("align_filter");

  // Each undirected pair is aligned once, where its (u < v) nonzero lives;
  // the mirrored label is shipped to the block owning (v, u).
  std::vector<Triple<EdgeLabel>> local;
  std::vector<std::vector<Bytes>> outboxes(g.size(), std::vector<Bytes>(g.size()));

  // An overlap of length ov shares at least ov-k+1 seed positions, each a
  // distinct canonical column unless the k-mer repeats inside the window.
  // Pairs whose shared-column count cannot reach min_overlap (with slack
  // for in-window repeats) are skipped before extension; the same window
  // arithmetic bounds the seed stride.
  const std::int64_t window = min_overlap - seed_k + 1;
  const std::uint32_t min_count = static_cast<std::uint32_t>(std::max<std::int64_t>(1, window - 8));
  const std::uint32_t stride = static_cast<std::uint32_t>(std::max<std::int64_t>(1, window / 2));

  std::unordered_map<std::int64_t, SeedList> seed_cache;
  auto seeds_of = [&](std::int64_t id) -> const SeedList& {
    const auto [it, fresh] = seed_cache.try_emplace(id);
    if (fresh) it->second = make_seed_list(store.bases(id), seed_k, stride);
    return it->second;
  };

  for (Rank r = 0; r < g.size(); ++r) {
    for (const auto& t : candidates.block_triples(r)) {
      if (t.row >= t.col) continue;
      if (t.value.count < min_count) continue;
      const std::int64_t u = t.row, v = t.col;
      const std::string_view su = store.bases(u);
      const std::string_view sv = store.bases(v);
      const auto coords = best_overlap(su, sv, seeds_of(u), seeds_of(v), min_overlap, seed_k);
      if (!coords) continue;
      const std::int64_t lu = static_cast<std::int64_t>(su.size());
      const std::int64_t lv = static_cast<std::int64_t>(sv.size());

      const EdgeLabel fwd = label_from_coords(*coords, lu, lv);
      const EdgeLabel rev = mirror_label(fwd, lu, lv);
      local.push_back({u, v, fwd});
      const Rank mirror_owner = candidates.owner_rank(v, u);
      if (mirror_owner == r) {
        local.push_back({v, u, rev});
      } else {
        encode_triples(outboxes[r][mirror_owner], std::vector<Triple<EdgeLabel>>{{v, u, rev}});
      }
    }
  }

  const auto inboxes = g.alltoall(outboxes);
  for (Rank dst = 0; dst < g.size(); ++dst) {
    for (Rank src = 0; src < g.size(); ++src) {
      const char* p = inboxes[dst][src].data();
      const char* end = p + inboxes[dst][src].size();
      while (p != end) decode_triples(p, local);
    }
  }
  return DistSparseMatrix<EdgeLabel>::from_triples(g, candidates.n_rows(), candidates.n_cols(),
                                                   local);
}

ContainmentPrune prune_contained(const DistSparseMatrix<EdgeLabel>& r, const ReadStore& store) {
  Grid& g = r.grid();
  g.ledger().set_stage("prune_contained");

  std::vector<std::vector<std::int64_t>> flagged(g.size());
  for (Rank rank = 0; rank < g.size(); ++rank) {
    for (const auto& t : r.block_triples(rank)) {
      const std::int64_t lu = store.length(t.row);
      const std::int64_t lv = store.length(t.col);
      const bool src_in = src_contained(t.value, lu, lv);
      const bool dst_in = dst_contained(t.value);
      if (src_in && dst_in) {
        flagged[rank].push_back(std::max(t.row, t.col));  // duplicates keep the smaller id
      } else if (src_in) {
        flagged[rank].push_back(t.row);
      } else if (dst_in) {
        flagged[rank].push_back(t.col);
      }
    }
  }

  // Every rank needs the full masked set to clear its rows and columns.
  std::vector<std::vector<Bytes>> outboxes(g.size(), std::vector<Bytes>(g.size()));
  for (Rank src = 0; src < g.size(); ++src) {
    std::sort(flagged[src].begin(), flagged[src].end());
    flagged[src].erase(std::unique(flagged[src].begin(), flagged[src].end()),
                       flagged[src].end());
    Bytes buf;
    for (std::int64_t id : flagged[src]) {
      buf.append(reinterpret_cast<const char*>(&id), sizeof(id));
    }
    for (Rank dst = 0; dst < g.size(); ++dst) outboxes[src][dst] = buf;
  }
  const auto inboxes = g.alltoall(outboxes);

  std::unordered_set<std::int64_t> kill;
  for (Rank src = 0; src < g.size(); ++src) {
    const Bytes& buf = inboxes[0][src];
    for (std::size_t i = 0; i + sizeof(std::int64_t) <= buf.size(); i += sizeof(std::int64_t)) {
      std::int64_t id;
      std::memcpy(&id, buf.data() + i, sizeof(id));
      kill.insert(id);
    }
  }

  ContainmentPrune out;
  out.graph = prune_rows_cols(r, kill);
  out.masked.assign(kill.begin(), kill.end());
  std::sort(out.masked.begin(), out.masked.end());
  return out;
}

namespace {

/// Per-direction minimum two-hop overhang sums.
struct TwoHopMin {
  std::array<std::int64_t, 4> min_sum{std::numeric_limits<std::int64_t>::max(),
                                      std::numeric_limits<std::int64_t>::max(),
                                      std::numeric_limits<std::int64_t>::max(),
                                      std::numeric_limits<std::int64_t>::max()};
};

}  // namespace

DistSparseMatrix<EdgeLabel> transitive_reduction(const DistSparseMatrix<EdgeLabel>& r,
                                                 std::int64_t fuzz, int max_iters) {
  Grid& g = r.grid();
  g.ledger().set_stage("transitive_reduction");

  DistSparseMatrix<EdgeLabel> current = r;
  for (int iter = 0; iter < max_iters; ++iter) {
    auto mul = [](const EdgeLabel& first, const EdgeLabel& second) -> std::optional<TwoHopMin> {
      if (!walk_compatible(first.dir, second.dir)) return std::nullopt;
      TwoHopMin m;
      m.min_sum[static_cast<int>(compose_dir(first.dir, second.dir))] =
          static_cast<std::int64_t>(first.overhang) + second.overhang;
      return m;
    };
    auto add = [](TwoHopMin& acc, const TwoHopMin& m) {
      for (int d = 0; d < 4; ++d) acc.min_sum[d] = std::min(acc.min_sum[d], m.min_sum[d]);
    };
    auto keep = [](std::int64_t u, std::int64_t w, const TwoHopMin&) { return u != w; };
    const auto two_hop = spgemm<EdgeLabel, EdgeLabel, TwoHopMin>(current, current, mul, add, keep);

    std::vector<Triple<EdgeLabel>> survivors;
    std::vector<std::uint8_t> changed(g.size(), 0);
    for (Rank rank = 0; rank < g.size(); ++rank) {
      const CscMatrix<TwoHopMin> n = two_hop.block(rank).csc();
      const CscMatrix<EdgeLabel> block = current.block(rank).csc();
      const Coord c = g.coords(rank);
      const std::int64_t row0 = current.row_bands().begin(c.row);
      const std::int64_t col0 = current.col_bands().begin(c.col);
      for (std::int64_t col = 0; col < block.n_cols; ++col) {
        for (std::int64_t k = block.col_ptr[col]; k < block.col_ptr[col + 1]; ++k) {
          const std::int64_t row = block.row_idx[k];
          const EdgeLabel& e = block.values[k];
          bool transitive = false;
          if (const TwoHopMin* m = n.find(row, col)) {
            transitive = m->min_sum[static_cast<int>(e.dir)] <=
                         static_cast<std::int64_t>(e.overhang) + fuzz;
          }
          if (transitive) {
            changed[rank] = 1;
          } else {
            survivors.push_back({row0 + row, col0 + col, e});
          }
        }
      }
    }

    if (!g.any_flag(changed)) return current;
    current = DistSparseMatrix<EdgeLabel>::from_triples(g, r.n_rows(), r.n_cols(), survivors);
  }
  throw NonConvergence("transitive reduction did not converge in " + std::to_string(max_iters) +
                       " iterations");
}

}  // namespace contigforge

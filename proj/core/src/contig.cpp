#include "contigforge/contig.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <unordered_set>

namespace contigforge {

namespace {

void encode_i64(Bytes& out, std::int64_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::int64_t decode_i64(const char*& p) {
  std::int64_t v;
  std::memcpy(&v, p, sizeof(v));
  p += sizeof(v);
  return v;
}

std::vector<std::int64_t> decode_i64_buffer(const Bytes& buf) {
  std::vector<std::int64_t> out(buf.size() / sizeof(std::int64_t));
  if (!out.empty()) std::memcpy(out.data(), buf.data(), out.size() * sizeof(std::int64_t));
  return out;
}

}  // namespace

BranchRemoval branch_removal(const DistSparseMatrix<EdgeLabel>& s) {
  Grid& g = s.grid();
  g.ledger().set_stage("branch_removal");
  const VectorLayout layout(s.n_rows(), g);
  const auto degree = row_degree(s, layout);

  // Owners select their branching vertices, then the ids travel grid-wide
  // so every rank can clear its rows and columns.
  std::vector<std::vector<Bytes>> outboxes(g.size(), std::vector<Bytes>(g.size()));
  for (Rank r = 0; r < g.size(); ++r) {
    Bytes ids;
    const std::int64_t base = layout.chunk_begin(r);
    for (std::size_t i = 0; i < degree[r].size(); ++i) {
      if (degree[r][i] >= 3) encode_i64(ids, base + static_cast<std::int64_t>(i));
    }
    for (Rank dst = 0; dst < g.size(); ++dst) outboxes[r][dst] = ids;
  }
  const auto inboxes = g.alltoall(outboxes);

  std::unordered_set<std::int64_t> kill;
  for (Rank src = 0; src < g.size(); ++src) {
    for (std::int64_t id : decode_i64_buffer(inboxes[0][src])) kill.insert(id);
  }

  BranchRemoval out;
  out.linear = prune_rows_cols(s, kill);
  out.masked.assign(kill.begin(), kill.end());
  std::sort(out.masked.begin(), out.masked.end());
  return out;
}

std::vector<std::int64_t> ComponentVector::gather() const {
  std::vector<std::int64_t> out(layout.total());
  for (Rank r = 0; r < layout.ranks(); ++r) {
    std::copy(chunks[r].begin(), chunks[r].end(), out.begin() + layout.chunk_begin(r));
  }
  return out;
}

std::int64_t ComponentVector::label_of(std::int64_t vertex) const {
  const Rank r = layout.owner(vertex);
  return chunks[r][vertex - layout.chunk_begin(r)];
}

ComponentVector connected_components(const DistSparseMatrix<EdgeLabel>& l) {
  Grid& g = l.grid();
  g.ledger().set_stage("connected_components");
  const std::int64_t n = l.n_rows();
  const int side = g.side();
  const VectorLayout layout(n, g);

  ComponentVector result;
  result.layout = layout;
  result.chunks.resize(g.size());

  const auto degree = row_degree(l, layout);

  // Parent vector, one chunk per owner; f[u] <= u throughout.
  std::vector<std::vector<std::int64_t>> f(g.size());
  for (Rank r = 0; r < g.size(); ++r) {
    f[r].resize(layout.chunk_size(r));
    std::iota(f[r].begin(), f[r].end(), layout.chunk_begin(r));
  }

  // Edge structure per block; labels are irrelevant here.
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> edges(g.size());
  for (Rank r = 0; r < g.size(); ++r) {
    for (const auto& t : l.block_triples(r)) edges[r].emplace_back(t.row, t.col);
  }

  // Cached parent values per row band and column band, plus the set of
  // indices freshened since the last hook round (the active frontier).
  std::vector<std::vector<std::int64_t>> row_f(side), col_f(side);
  std::vector<std::unordered_set<std::int64_t>> row_active(side), col_active(side);

  auto propagate_full = [&]() {
    for (int row = 0; row < side; ++row) {
      std::vector<Bytes> contrib(side);
      for (int col = 0; col < side; ++col) {
        for (std::int64_t v : f[g.rank_of(row, col)]) encode_i64(contrib[col], v);
      }
      row_f[row] = decode_i64_buffer(g.row_allgather(row, contrib));
      row_active[row].clear();
      for (std::int64_t i = layout.band_begin(row); i < layout.band_end(row); ++i) {
        row_active[row].insert(i);
      }
    }
    std::vector<Bytes> payload(g.size());
    for (Rank r = 0; r < g.size(); ++r) {
      for (std::int64_t v : row_f[g.coords(r).row]) encode_i64(payload[r], v);
    }
    const auto moved = g.transpose_exchange(payload);
    for (int col = 0; col < side; ++col) {
      col_f[col] = decode_i64_buffer(moved[g.rank_of(0, col)]);
      col_active[col] = row_active[col];
    }
  };

  auto propagate_deltas = [&](const std::vector<std::vector<std::int64_t>>& changed) {
    for (int band = 0; band < side; ++band) {
      row_active[band].clear();
      col_active[band].clear();
    }
    std::vector<Bytes> band_deltas(side);
    for (int row = 0; row < side; ++row) {
      std::vector<Bytes> contrib(side);
      for (int col = 0; col < side; ++col) {
        const Rank r = g.rank_of(row, col);
        for (std::int64_t x : changed[r]) {
          encode_i64(contrib[col], x);
          encode_i64(contrib[col], f[r][x - layout.chunk_begin(r)]);
        }
      }
      band_deltas[row] = g.row_allgather(row, contrib);
      const char* p = band_deltas[row].data();
      const char* end = p + band_deltas[row].size();
      while (p != end) {
        const std::int64_t x = decode_i64(p);
        const std::int64_t val = decode_i64(p);
        row_f[row][x - layout.band_begin(row)] = val;
        row_active[row].insert(x);
      }
    }
    std::vector<Bytes> payload(g.size());
    for (Rank r = 0; r < g.size(); ++r) payload[r] = band_deltas[g.coords(r).row];
    const auto moved = g.transpose_exchange(payload);
    for (int col = 0; col < side; ++col) {
      const Bytes& buf = moved[g.rank_of(0, col)];
      const char* p = buf.data();
      const char* end = p + buf.size();
      while (p != end) {
        const std::int64_t x = decode_i64(p);
        const std::int64_t val = decode_i64(p);
        col_f[col][x - layout.band_begin(col)] = val;
        col_active[col].insert(x);
      }
    }
  };

  propagate_full();

  const int iteration_cap = static_cast<int>(2 * n + 16);
  for (int iter = 0;; ++iter) {
    if (iter >= iteration_cap) throw Error("connected_components failed to converge");

    // Hooking: for every edge whose endpoint labels differ, propose
    // f[max(fu, fv)] = min(fu, fv); the owner applies the minimum proposal.
    std::vector<std::map<std::int64_t, std::int64_t>> proposals(g.size());
    for (Rank r = 0; r < g.size(); ++r) {
      const Coord c = g.coords(r);
      for (const auto& [u, v] : edges[r]) {
        if (!row_active[c.row].contains(u) && !col_active[c.col].contains(v)) continue;
        const std::int64_t fu = row_f[c.row][u - layout.band_begin(c.row)];
        const std::int64_t fv = col_f[c.col][v - layout.band_begin(c.col)];
        if (fu == fv) continue;
        const std::int64_t target = std::max(fu, fv);
        const std::int64_t value = std::min(fu, fv);
        auto [it, fresh] = proposals[r].try_emplace(target, value);
        if (!fresh) it->second = std::min(it->second, value);
      }
    }
    std::vector<std::vector<Bytes>> outboxes(g.size(), std::vector<Bytes>(g.size()));
    for (Rank r = 0; r < g.size(); ++r) {
      for (const auto& [target, value] : proposals[r]) {
        Bytes& buf = outboxes[r][layout.owner(target)];
        encode_i64(buf, target);
        encode_i64(buf, value);
      }
    }
    const auto hook_in = g.alltoall(outboxes);

    std::vector<std::vector<std::int64_t>> changed(g.size());
    std::vector<std::unordered_set<std::int64_t>> changed_set(g.size());
    for (Rank r = 0; r < g.size(); ++r) {
      for (Rank src = 0; src < g.size(); ++src) {
        const char* p = hook_in[r][src].data();
        const char* end = p + hook_in[r][src].size();
        while (p != end) {
          const std::int64_t target = decode_i64(p);
          const std::int64_t value = decode_i64(p);
          std::int64_t& slot = f[r][target - layout.chunk_begin(r)];
          if (value < slot) {
            slot = value;
            changed_set[r].insert(target);
          }
        }
      }
    }

    // Shortcutting: pointer jumping, cheap rounds over vertices whose
    // parent just changed, then a full verification round. The hook
    // quiescence argument needs fully compressed parents, so the loop only
    // exits when a full round moves nothing.
    std::vector<std::vector<std::int64_t>> pending(g.size());
    for (Rank r = 0; r < g.size(); ++r) {
      pending[r].assign(changed_set[r].begin(), changed_set[r].end());
      std::sort(pending[r].begin(), pending[r].end());
    }
    while (true) {
      std::vector<std::uint8_t> has_pending(g.size(), 0);
      for (Rank r = 0; r < g.size(); ++r) has_pending[r] = pending[r].empty() ? 0 : 1;
      const bool full_round = !g.any_flag(has_pending);

      std::vector<std::vector<Bytes>> queries(g.size(), std::vector<Bytes>(g.size()));
      std::vector<std::vector<std::vector<std::int64_t>>> askers(
          g.size(), std::vector<std::vector<std::int64_t>>(g.size()));
      std::vector<std::uint8_t> jumped(g.size(), 0);
      std::vector<std::unordered_set<std::int64_t>> next_pending(g.size());
      for (Rank r = 0; r < g.size(); ++r) {
        const std::int64_t base = layout.chunk_begin(r);
        std::vector<std::int64_t> work;
        if (full_round) {
          for (std::size_t i = 0; i < f[r].size(); ++i) {
            const std::int64_t x = base + static_cast<std::int64_t>(i);
            if (f[r][i] != x) work.push_back(x);
          }
        } else {
          work = pending[r];
        }
        for (const std::int64_t x : work) {
          const std::int64_t y = f[r][x - base];
          if (y == x) continue;
          const Rank owner = layout.owner(y);
          if (owner == r) {
            const std::int64_t fy = f[r][y - base];
            if (fy < f[r][x - base]) {
              f[r][x - base] = fy;
              changed_set[r].insert(x);
              next_pending[r].insert(x);
              jumped[r] = 1;
            }
          } else {
            encode_i64(queries[r][owner], y);
            askers[r][owner].push_back(x);
          }
        }
      }
      const auto q_in = g.alltoall(queries);
      std::vector<std::vector<Bytes>> replies(g.size(), std::vector<Bytes>(g.size()));
      for (Rank r = 0; r < g.size(); ++r) {
        for (Rank src = 0; src < g.size(); ++src) {
          const char* p = q_in[r][src].data();
          const char* end = p + q_in[r][src].size();
          while (p != end) {
            const std::int64_t y = decode_i64(p);
            encode_i64(replies[r][src], f[r][y - layout.chunk_begin(r)]);
          }
        }
      }
      const auto r_in = g.alltoall(replies);
      for (Rank r = 0; r < g.size(); ++r) {
        for (Rank owner = 0; owner < g.size(); ++owner) {
          const auto values = decode_i64_buffer(r_in[r][owner]);
          for (std::size_t i = 0; i < values.size(); ++i) {
            const std::int64_t x = askers[r][owner][i];
            std::int64_t& slot = f[r][x - layout.chunk_begin(r)];
            if (values[i] < slot) {
              slot = values[i];
              changed_set[r].insert(x);
              next_pending[r].insert(x);
              jumped[r] = 1;
            }
          }
        }
      }
      for (Rank r = 0; r < g.size(); ++r) {
        pending[r].assign(next_pending[r].begin(), next_pending[r].end());
        std::sort(pending[r].begin(), pending[r].end());
      }
      if (full_round && !g.any_flag(jumped)) break;
    }

    std::vector<std::uint8_t> any_change(g.size(), 0);
    for (Rank r = 0; r < g.size(); ++r) {
      changed[r].assign(changed_set[r].begin(), changed_set[r].end());
      std::sort(changed[r].begin(), changed[r].end());
      any_change[r] = changed[r].empty() ? 0 : 1;
    }
    if (!g.any_flag(any_change)) break;
    propagate_deltas(changed);
  }

  // Dense relabel ordered by component minimum; isolated vertices get NONE.
  std::vector<std::vector<Bytes>> label_out(g.size(), std::vector<Bytes>(g.size()));
  for (Rank r = 0; r < g.size(); ++r) {
    std::vector<std::int64_t> mine;
    for (std::size_t i = 0; i < f[r].size(); ++i) {
      if (degree[r][i] > 0) mine.push_back(f[r][i]);
    }
    std::sort(mine.begin(), mine.end());
    mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
    Bytes buf;
    for (std::int64_t v : mine) encode_i64(buf, v);
    for (Rank dst = 0; dst < g.size(); ++dst) label_out[r][dst] = buf;
  }
  const auto label_in = g.alltoall(label_out);
  std::vector<std::int64_t> roots;
  for (Rank src = 0; src < g.size(); ++src) {
    const auto vals = decode_i64_buffer(label_in[0][src]);
    roots.insert(roots.end(), vals.begin(), vals.end());
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  std::unordered_map<std::int64_t, std::int64_t> dense;
  for (std::size_t i = 0; i < roots.size(); ++i) dense[roots[i]] = static_cast<std::int64_t>(i);

  result.n_contigs = static_cast<std::int64_t>(roots.size());
  for (Rank r = 0; r < g.size(); ++r) {
    result.chunks[r].resize(f[r].size(), ComponentVector::kNone);
    for (std::size_t i = 0; i < f[r].size(); ++i) {
      if (degree[r][i] > 0) result.chunks[r][i] = dense.at(f[r][i]);
    }
  }
  return result;
}

ContigSizes contig_sizes(Grid& grid, const ComponentVector& v) {
  grid.ledger().set_stage("contig_sizes");
  ContigSizes out;
  out.ownership = BlockPartition(v.n_contigs, grid.size());
  std::vector<std::vector<std::int64_t>> partials(
      grid.size(), std::vector<std::int64_t>(v.n_contigs, 0));
  for (Rank r = 0; r < grid.size(); ++r) {
    for (std::int64_t label : v.chunks[r]) {
      if (label != ComponentVector::kNone) partials[r][label] += 1;
    }
  }
  out.slices = grid.reduce_scatter(partials, out.ownership.offsets());
  for (const auto& slice : out.slices) {
    out.gathered.insert(out.gathered.end(), slice.begin(), slice.end());
  }
  return out;
}

AssignmentVector lpt_assign(const std::vector<std::int64_t>& sizes, int bins) {
  if (bins < 1) throw ConfigError("lpt_assign: need at least one bin");
  std::vector<std::int64_t> order(sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return sizes[a] != sizes[b] ? sizes[a] > sizes[b] : a < b;
  });

  AssignmentVector out;
  out.par.assign(sizes.size(), 0);
  out.rank_load.assign(bins, 0);
  for (std::int64_t c : order) {
    Rank best = 0;
    for (Rank r = 1; r < bins; ++r) {
      if (out.rank_load[r] < out.rank_load[best]) best = r;
    }
    out.par[c] = best;
    out.rank_load[best] += sizes[c];
  }
  return out;
}

AssignmentVector lpt_partition(Grid& grid, const std::vector<std::int64_t>& sizes) {
  grid.ledger().set_stage("lpt_partition");
  const int p = grid.size();
  const BlockPartition ownership(static_cast<std::int64_t>(sizes.size()), p);

  // Owners send their size slices to rank 0, which runs the greedy
  // assignment and broadcasts the result.
  std::vector<std::vector<Bytes>> to_root(p, std::vector<Bytes>(p));
  for (Rank r = 0; r < p; ++r) {
    for (std::int64_t c = ownership.begin(r); c < ownership.end(r); ++c) {
      encode_i64(to_root[r][0], sizes[c]);
    }
  }
  grid.alltoall(to_root);

  AssignmentVector out = lpt_assign(sizes, p);

  std::vector<std::vector<Bytes>> bcast(p, std::vector<Bytes>(p));
  Bytes encoded;
  for (Rank r : out.par) encode_i64(encoded, r);
  for (Rank dst = 0; dst < p; ++dst) bcast[0][dst] = encoded;
  grid.alltoall(bcast);
  return out;
}

std::vector<LocalSubgraph> induced_subgraph(const DistSparseMatrix<EdgeLabel>& l,
                                            const ComponentVector& v,
                                            const AssignmentVector& par) {
  Grid& g = l.grid();
  g.ledger().set_stage("induced_subgraph");
  const int side = g.side();
  const VectorLayout& layout = v.layout;

  // Destination rank per vertex, computed on the owner chunks.
  std::vector<std::vector<std::int64_t>> dest(g.size());
  for (Rank r = 0; r < g.size(); ++r) {
    dest[r].resize(v.chunks[r].size());
    for (std::size_t i = 0; i < v.chunks[r].size(); ++i) {
      const std::int64_t label = v.chunks[r][i];
      dest[r][i] = label == ComponentVector::kNone ? -1 : par.par[label];
    }
  }

  // Row allgather then transpose exchange: every rank learns the
  // destination of its whole row band and column band.
  std::vector<std::vector<std::int64_t>> row_dest(side), col_dest(side);
  std::vector<Bytes> band_buf(side);
  for (int row = 0; row < side; ++row) {
    std::vector<Bytes> contrib(side);
    for (int col = 0; col < side; ++col) {
      for (std::int64_t d : dest[g.rank_of(row, col)]) encode_i64(contrib[col], d);
    }
    band_buf[row] = g.row_allgather(row, contrib);
    row_dest[row] = decode_i64_buffer(band_buf[row]);
  }
  std::vector<Bytes> payload(g.size());
  for (Rank r = 0; r < g.size(); ++r) payload[r] = band_buf[g.coords(r).row];
  const auto moved = g.transpose_exchange(payload);
  for (int col = 0; col < side; ++col) {
    col_dest[col] = decode_i64_buffer(moved[g.rank_of(0, col)]);
  }

  // Ship every intra-destination edge as an (u, v, label) triple.
  std::vector<std::vector<Bytes>> outboxes(g.size(), std::vector<Bytes>(g.size()));
  for (Rank r = 0; r < g.size(); ++r) {
    const Coord c = g.coords(r);
    std::vector<std::vector<Triple<EdgeLabel>>> to_rank(g.size());
    for (const auto& t : l.block_triples(r)) {
      const std::int64_t du = row_dest[c.row][t.row - layout.band_begin(c.row)];
      const std::int64_t dv = col_dest[c.col][t.col - layout.band_begin(c.col)];
      if (du != dv || du < 0) {
        throw InconsistentAssignment("edge (" + std::to_string(t.row) + "," +
                                     std::to_string(t.col) +
                                     ") endpoints map to different ranks");
      }
      to_rank[du].push_back(t);
    }
    for (Rank dst = 0; dst < g.size(); ++dst) {
      if (!to_rank[dst].empty()) encode_triples(outboxes[r][dst], to_rank[dst]);
    }
  }
  const auto inboxes = g.alltoall(outboxes);

  std::vector<LocalSubgraph> result(g.size());
  for (Rank r = 0; r < g.size(); ++r) {
    std::vector<Triple<EdgeLabel>> mine;
    for (Rank src = 0; src < g.size(); ++src) {
      const char* p = inboxes[r][src].data();
      const char* end = p + inboxes[r][src].size();
      while (p != end) decode_triples(p, mine);
    }
    std::vector<std::int64_t> ids;
    ids.reserve(mine.size() * 2);
    for (const auto& t : mine) {
      ids.push_back(t.row);
      ids.push_back(t.col);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::unordered_map<std::int64_t, std::int64_t> to_local;
    for (std::size_t i = 0; i < ids.size(); ++i) to_local[ids[i]] = static_cast<std::int64_t>(i);
    std::vector<Triple<EdgeLabel>> local;
    local.reserve(mine.size());
    for (const auto& t : mine) {
      local.push_back({to_local.at(t.row), to_local.at(t.col), t.value});
    }
    result[r].global_ids = std::move(ids);
    result[r].matrix = CscMatrix<EdgeLabel>::from_triples(
        static_cast<std::int64_t>(result[r].global_ids.size()),
        static_cast<std::int64_t>(result[r].global_ids.size()), std::move(local));
  }
  return result;
}

namespace {

struct WalkStep {
  std::int64_t next = -1;
  EdgeLabel label;
};

/// Unvisited successor of `current` in the local matrix, plus the label of
/// the outgoing edge (current -> next). `allow_visited` (the cycle root) is
/// taken only when no unvisited neighbor remains.
std::optional<WalkStep> next_step(const CscMatrix<EdgeLabel>& m, std::int64_t current,
                                  const std::vector<bool>& visited, std::int64_t allow_visited) {
  auto make_step = [&](std::int64_t neighbor) {
    const EdgeLabel* out = m.find(current, neighbor);
    if (out == nullptr) throw BrokenChain("edge without a mirrored twin in the local matrix");
    return WalkStep{neighbor, *out};
  };
  for (std::int64_t k = m.col_ptr[current]; k < m.col_ptr[current + 1]; ++k) {
    if (!visited[m.row_idx[k]]) return make_step(m.row_idx[k]);
  }
  for (std::int64_t k = m.col_ptr[current]; k < m.col_ptr[current + 1]; ++k) {
    if (m.row_idx[k] == allow_visited) return make_step(allow_visited);
  }
  return std::nullopt;
}

}  // namespace

std::vector<AssembledContig> local_assembly(const LocalSubgraph& local, const ReadStore& store) {
  const CscMatrix<EdgeLabel>& m = local.matrix;
  const std::int64_t n = m.n_cols;
  for (std::int64_t c = 0; c < n; ++c) {
    if (m.col_degree(c) > 2) {
      throw BrokenChain("local matrix has a vertex of degree > 2");
    }
  }

  std::vector<bool> visited(n, false);
  std::vector<AssembledContig> contigs;

  auto walk = [&](std::int64_t root, bool circular) {
    ContigChain chain;
    chain.circular = circular;
    chain.reads.push_back(local.global_ids[root]);
    visited[root] = true;

    std::int64_t current = root;
    while (true) {
      const std::int64_t closing = circular ? root : -1;
      const auto step = next_step(m, current, visited, closing);
      if (!step) break;
      if (circular && step->next == root) {
        // Closing edge of a cycle: the walk stops, the edge is dropped.
        break;
      }
      if (visited[step->next]) {
        throw BrokenChain("walk revisited vertex " +
                          std::to_string(local.global_ids[step->next]));
      }
      if (!chain.edges.empty() && !walk_compatible(chain.edges.back().dir, step->label.dir)) {
        throw BrokenChain("walk direction mismatch at read " +
                          std::to_string(local.global_ids[current]));
      }
      chain.edges.push_back(step->label);
      chain.reads.push_back(local.global_ids[step->next]);
      visited[step->next] = true;
      current = step->next;
    }

    // Orientations: the root exits through the end its first edge uses;
    // every later vertex enters through the end its incoming edge uses.
    const std::size_t q = chain.reads.size();
    if (q < 2) throw BrokenChain("walk shorter than two reads");
    chain.forward.resize(q);
    chain.forward[0] = src_uses_suffix(chain.edges[0].dir);
    for (std::size_t i = 1; i < q; ++i) {
      chain.forward[i] = !dst_uses_suffix(chain.edges[i - 1].dir);
    }

    std::string seq;
    for (std::size_t i = 0; i < q; ++i) {
      const std::int64_t id = chain.reads[i];
      const std::int64_t len = store.length(id);
      const std::int64_t from =
          i == 0 ? (chain.forward[0] ? 0 : len - 1) : chain.edges[i - 1].post;
      const std::int64_t to =
          i == q - 1 ? (chain.forward[i] ? len - 1 : 0) : chain.edges[i].pre;
      if (chain.forward[i] ? from > to : from < to) {
        throw BrokenChain("inconsistent pre/post labels at read " + std::to_string(id));
      }
      // The inclusive i>j slice cannot express a one-base reverse-complement
      // span, so the orientation flag picks the strand explicitly.
      seq += chain.forward[i] ? store.slice(id, from, to)
                              : reverse_complement(store.slice(id, to, from));
    }
    contigs.push_back({std::move(chain), std::move(seq)});
  };

  // Scan in ascending global-id order for unvisited degree-1 roots.
  for (std::int64_t c = 0; c < n; ++c) {
    if (!visited[c] && m.col_degree(c) == 1) walk(c, false);
  }
  // Whatever is left is a cycle; break it at its smallest global id.
  for (std::int64_t c = 0; c < n; ++c) {
    if (!visited[c] && m.col_degree(c) == 2) walk(c, true);
  }
  return contigs;
}

}  // namespace contigforge

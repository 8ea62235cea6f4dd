#pragma once

#include <cstring>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "contigforge/edge_label.hpp"
#include "contigforge/grid.hpp"
#include "contigforge/sparse.hpp"

namespace contigforge {

/// Wire codec for matrix payloads. Trivially copyable payloads get the
/// default memcpy implementation; variable-length ones specialize.
template <class T>
struct Codec {
  static_assert(std::is_trivially_copyable_v<T>);
  static void encode(Bytes& out, const T& v) {
    out.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  static T decode(const char*& p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    p += sizeof(T);
    return v;
  }
};

// Field-wise codec so struct padding never reaches the wire.
template <>
struct Codec<EdgeLabel> {
  static void encode(Bytes& out, const EdgeLabel& e) {
    out.push_back(static_cast<char>(e.dir));
    out.append(reinterpret_cast<const char*>(&e.overhang), sizeof(e.overhang));
    out.append(reinterpret_cast<const char*>(&e.pre), sizeof(e.pre));
    out.append(reinterpret_cast<const char*>(&e.post), sizeof(e.post));
  }
  static EdgeLabel decode(const char*& p) {
    EdgeLabel e;
    e.dir = static_cast<EdgeDir>(*p++);
    std::memcpy(&e.overhang, p, sizeof(e.overhang));
    p += sizeof(e.overhang);
    std::memcpy(&e.pre, p, sizeof(e.pre));
    p += sizeof(e.pre);
    std::memcpy(&e.post, p, sizeof(e.post));
    p += sizeof(e.post);
    return e;
  }
};

template <class T>
void encode_triples(Bytes& out, const std::vector<Triple<T>>& triples) {
  const std::uint64_t n = triples.size();
  out.append(reinterpret_cast<const char*>(&n), sizeof(n));
  for (const auto& t : triples) {
    out.append(reinterpret_cast<const char*>(&t.row), sizeof(t.row));
    out.append(reinterpret_cast<const char*>(&t.col), sizeof(t.col));
    Codec<T>::encode(out, t.value);
  }
}

template <class T>
void decode_triples(const char*& p, std::vector<Triple<T>>& out) {
  std::uint64_t n;
  std::memcpy(&n, p, sizeof(n));
  p += sizeof(n);
  out.reserve(out.size() + n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Triple<T> t;
    std::memcpy(&t.row, p, sizeof(t.row));
    p += sizeof(t.row);
    std::memcpy(&t.col, p, sizeof(t.col));
    p += sizeof(t.col);
    t.value = Codec<T>::decode(p);
    out.push_back(std::move(t));
  }
}

/// Sparse matrix distributed over the grid in 2D blocks: rank (i,j) holds
/// the block covering row band i and column band j. Both band partitions
/// split their dimension into `side` contiguous pieces within one of the
/// even share. Blocks are immutable once built.
template <class T>
class DistSparseMatrix {
 public:
  DistSparseMatrix() = default;

  static DistSparseMatrix from_triples(Grid& grid, std::int64_t n_rows, std::int64_t n_cols,
                                       const std::vector<Triple<T>>& triples) {
    DistSparseMatrix m;
    m.grid_ = &grid;
    m.n_rows_ = n_rows;
    m.n_cols_ = n_cols;
    m.row_bands_ = BlockPartition(n_rows, grid.side());
    m.col_bands_ = BlockPartition(n_cols, grid.side());
    std::vector<std::vector<Triple<T>>> per_rank(grid.size());
    for (const auto& t : triples) {
      if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
        throw OutOfBounds("triple outside matrix bounds");
      }
      per_rank[m.owner_rank(t.row, t.col)].push_back(t);
    }
    m.blocks_.reserve(grid.size());
    for (Rank r = 0; r < grid.size(); ++r) {
      const Coord c = grid.coords(r);
      CscMatrix<T> local(m.row_bands_.size(c.row), m.col_bands_.size(c.col));
      std::vector<Triple<T>> local_triples;
      local_triples.reserve(per_rank[r].size());
      for (auto& t : per_rank[r]) {
        local_triples.push_back(
            {t.row - m.row_bands_.begin(c.row), t.col - m.col_bands_.begin(c.col), t.value});
      }
      m.blocks_.push_back(Block<T>::adopt(
          CscMatrix<T>::from_triples(local.n_rows, local.n_cols, std::move(local_triples))));
    }
    return m;
  }

  std::int64_t n_rows() const { return n_rows_; }
  std::int64_t n_cols() const { return n_cols_; }
  Grid& grid() const { return *grid_; }
  const BlockPartition& row_bands() const { return row_bands_; }
  const BlockPartition& col_bands() const { return col_bands_; }
  const Block<T>& block(Rank r) const { return blocks_[r]; }

  Rank owner_rank(std::int64_t row, std::int64_t col) const {
    return grid_->rank_of(row_bands_.owner(row), col_bands_.owner(col));
  }

  std::int64_t nnz() const {
    std::int64_t total = 0;
    for (const auto& b : blocks_) total += b.nnz();
    return total;
  }

  /// Global triples of one block, sorted by (col, row).
  std::vector<Triple<T>> block_triples(Rank r) const {
    const Coord c = grid_->coords(r);
    std::vector<Triple<T>> out = blocks_[r].to_triples();
    for (auto& t : out) {
      t.row += row_bands_.begin(c.row);
      t.col += col_bands_.begin(c.col);
    }
    return out;
  }

  /// All nonzeros gathered to the controller, sorted by (col, row).
  std::vector<Triple<T>> gather_triples() const {
    std::vector<Triple<T>> out;
    for (Rank r = 0; r < grid_->size(); ++r) {
      auto t = block_triples(r);
      out.insert(out.end(), t.begin(), t.end());
    }
    std::sort(out.begin(), out.end(), [](const Triple<T>& a, const Triple<T>& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    return out;
  }

  bool blocks_valid() const {
    for (const auto& b : blocks_) {
      if (!b.csc().valid()) return false;
    }
    return true;
  }

 private:
  template <class U>
  friend class DistSparseMatrix;

  Grid* grid_ = nullptr;
  std::int64_t n_rows_ = 0;
  std::int64_t n_cols_ = 0;
  BlockPartition row_bands_;
  BlockPartition col_bands_;
  std::vector<Block<T>> blocks_;
};

namespace detail {

/// Every rank of grid row i ends up with the full row band i of `m`,
/// decoded to global triples. Cost: one row allgather per grid row.
template <class T>
std::vector<std::vector<Triple<T>>> gather_row_bands(const DistSparseMatrix<T>& m) {
  Grid& g = m.grid();
  std::vector<std::vector<Triple<T>>> bands(g.side());
  if (g.side() == 1) {  // degenerate grid: the band is already local
    bands[0] = m.block_triples(0);
    return bands;
  }
  for (int row = 0; row < g.side(); ++row) {
    std::vector<Bytes> contrib(g.side());
    for (int col = 0; col < g.side(); ++col) {
      encode_triples(contrib[col], m.block_triples(g.rank_of(row, col)));
    }
    const Bytes all = g.row_allgather(row, contrib);
    const char* p = all.data();
    for (int col = 0; col < g.side(); ++col) decode_triples(p, bands[row]);
  }
  return bands;
}

/// Every rank of grid column j ends up with the full column band j: each
/// (k,j) block hops to (j,k) via the transpose exchange, a row allgather
/// assembles the band on row j, and a second exchange returns it to column
/// j. Result indexed by column band.
template <class T>
std::vector<std::vector<Triple<T>>> gather_col_bands(const DistSparseMatrix<T>& m) {
  Grid& g = m.grid();
  if (g.side() == 1) {
    std::vector<std::vector<Triple<T>>> bands(1);
    bands[0] = m.block_triples(0);
    return bands;
  }
  std::vector<Bytes> payload(g.size());
  for (Rank r = 0; r < g.size(); ++r) encode_triples(payload[r], m.block_triples(r));
  const std::vector<Bytes> moved = g.transpose_exchange(payload);

  std::vector<Bytes> band_at_row(g.side());
  for (int row = 0; row < g.side(); ++row) {
    std::vector<Bytes> contrib(g.side());
    for (int col = 0; col < g.side(); ++col) contrib[col] = moved[g.rank_of(row, col)];
    band_at_row[row] = g.row_allgather(row, contrib);
  }

  std::vector<Bytes> back(g.size());
  for (Rank r = 0; r < g.size(); ++r) back[r] = band_at_row[g.coords(r).row];
  const std::vector<Bytes> at_col = g.transpose_exchange(back);

  std::vector<std::vector<Triple<T>>> bands(g.side());
  for (int col = 0; col < g.side(); ++col) {
    // Any rank of column `col` holds the band now; decode once.
    const Bytes& buf = at_col[g.rank_of(0, col)];
    const char* p = buf.data();
    while (p != buf.data() + buf.size()) decode_triples(p, bands[col]);
  }
  return bands;
}

}  // namespace detail

/// Semiring product C = A * B. `mul(a, b) -> std::optional<C>` may reject a
/// product (string-graph walk validity lives here), `add(acc, c)` combines
/// products for one output entry and must be commutative-associative, and
/// `keep(row, col, acc)` filters finished entries (diagonal dropping etc.).
template <class A, class B, class C, class Mul, class Add, class Keep>
DistSparseMatrix<C> spgemm(const DistSparseMatrix<A>& a, const DistSparseMatrix<B>& b, Mul mul,
                           Add add, Keep keep) {
  if (a.n_cols() != b.n_rows()) throw DimensionMismatch("spgemm: inner dimensions differ");
  Grid& g = a.grid();

  const auto a_rows = detail::gather_row_bands(a);
  const auto b_cols = detail::gather_col_bands(b);

  // Gustavson's algorithm per rank: walk the output columns of the local
  // block, accumulating into a dense scratch over the row band.
  std::vector<Triple<C>> result;
  for (Rank r = 0; r < g.size(); ++r) {
    const Coord coord = g.coords(r);
    const std::int64_t row_lo = a.row_bands().begin(coord.row);
    const std::int64_t rows = a.row_bands().size(coord.row);
    const std::int64_t col_lo = b.col_bands().begin(coord.col);
    const std::int64_t cols = b.col_bands().size(coord.col);

    std::unordered_map<std::int64_t, std::vector<const Triple<A>*>> a_by_inner;
    a_by_inner.reserve(a_rows[coord.row].size());
    for (const auto& t : a_rows[coord.row]) a_by_inner[t.col].push_back(&t);
    std::vector<std::vector<const Triple<B>*>> b_by_col(cols);
    for (const auto& t : b_cols[coord.col]) b_by_col[t.col - col_lo].push_back(&t);

    std::vector<C> scratch(rows);
    std::vector<char> present(rows, 0);
    std::vector<std::int64_t> touched;
    for (std::int64_t w = 0; w < cols; ++w) {
      for (const Triple<B>* tb : b_by_col[w]) {
        const auto it = a_by_inner.find(tb->row);
        if (it == a_by_inner.end()) continue;
        for (const Triple<A>* ta : it->second) {
          std::optional<C> prod = mul(ta->value, tb->value);
          if (!prod) continue;
          const std::int64_t idx = ta->row - row_lo;
          if (!present[idx]) {
            present[idx] = 1;
            scratch[idx] = std::move(*prod);
            touched.push_back(idx);
          } else {
            add(scratch[idx], *prod);
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      for (const std::int64_t idx : touched) {
        if (keep(row_lo + idx, col_lo + w, scratch[idx])) {
          result.push_back({row_lo + idx, col_lo + w, std::move(scratch[idx])});
        }
        present[idx] = 0;
      }
      touched.clear();
    }
  }
  return DistSparseMatrix<C>::from_triples(g, a.n_rows(), b.n_cols(), result);
}

/// d[u] = nonzeros in row u. Row-band partial counts followed by a
/// reduce-scatter onto the banded vector layout; the returned chunks are
/// indexed by rank.
template <class T>
std::vector<std::vector<std::int64_t>> row_degree(const DistSparseMatrix<T>& s,
                                                  const VectorLayout& layout) {
  if (s.n_rows() != s.n_cols()) throw DimensionMismatch("row_degree: matrix must be square");
  Grid& g = s.grid();
  std::vector<std::vector<std::int64_t>> partials(g.size(),
                                                  std::vector<std::int64_t>(s.n_rows(), 0));
  for (Rank r = 0; r < g.size(); ++r) {
    for (const auto& t : s.block_triples(r)) partials[r][t.row] += 1;
  }
  return g.reduce_scatter(partials, layout.chunk_offsets());
}

/// Remove every nonzero whose row or column is in `kill`; dimensions and
/// indexing stay put.
template <class T>
DistSparseMatrix<T> prune_rows_cols(const DistSparseMatrix<T>& s,
                                    const std::unordered_set<std::int64_t>& kill) {
  std::vector<Triple<T>> keep;
  for (Rank r = 0; r < s.grid().size(); ++r) {
    for (auto& t : s.block_triples(r)) {
      if (!kill.contains(t.row) && !kill.contains(t.col)) keep.push_back(std::move(t));
    }
  }
  return DistSparseMatrix<T>::from_triples(s.grid(), s.n_rows(), s.n_cols(), keep);
}

/// Transpose via the pairwise block exchange. `mirror(value, row, col)`
/// maps each payload to its (col, row) view; plain payloads pass identity.
template <class T, class Mirror>
DistSparseMatrix<T> transpose(const DistSparseMatrix<T>& a, Mirror mirror) {
  Grid& g = a.grid();
  if (g.side() == 1) {
    std::vector<Triple<T>> flipped;
    for (const auto& t : a.block_triples(0)) {
      flipped.push_back({t.col, t.row, mirror(t.value, t.row, t.col)});
    }
    return DistSparseMatrix<T>::from_triples(g, a.n_cols(), a.n_rows(), flipped);
  }
  std::vector<Bytes> payload(g.size());
  for (Rank r = 0; r < g.size(); ++r) {
    std::vector<Triple<T>> flipped;
    for (const auto& t : a.block_triples(r)) {
      flipped.push_back({t.col, t.row, mirror(t.value, t.row, t.col)});
    }
    encode_triples(payload[r], flipped);
  }
  const std::vector<Bytes> received = g.transpose_exchange(payload);
  std::vector<Triple<T>> all;
  for (Rank r = 0; r < g.size(); ++r) {
    const char* p = received[r].data();
    decode_triples(p, all);
  }
  return DistSparseMatrix<T>::from_triples(g, a.n_cols(), a.n_rows(), all);
}

template <class T>
DistSparseMatrix<T> transpose(const DistSparseMatrix<T>& a) {
  return transpose(a, [](const T& v, std::int64_t, std::int64_t) { return v; });
}

}  // namespace contigforge

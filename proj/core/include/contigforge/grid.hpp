#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "contigforge/errors.hpp"

namespace contigforge {

using Rank = int;
using Bytes = std::string;  // raw byte buffer

/// Grid coordinate of a rank, row-major.
struct Coord {
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Collective kinds tracked by the ledger.
enum class CommOp : std::uint8_t {
  row_allgather = 0,
  transpose = 1,
  alltoall = 2,
  reduce_scatter = 3,
};

const char* comm_op_name(CommOp op);

/// Per-(src,dst) message and byte counters, tagged with the collective kind
/// and the pipeline stage active when the traffic happened. Sends and
/// deliveries are counted separately so conservation is checkable.
class CommLedger {
 public:
  struct Key {
    std::string stage;
    CommOp op;
    Rank src;
    Rank dst;
    auto operator<=>(const Key&) const = default;
  };
  struct Counters {
    std::uint64_t msgs = 0;
    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_delivered = 0;
  };

  void set_stage(std::string stage) { stage_ = std::move(stage); }
  const std::string& stage() const { return stage_; }

  void record(CommOp op, Rank src, Rank dst, std::uint64_t msgs, std::uint64_t bytes);

  std::uint64_t total_bytes_sent() const;
  std::uint64_t total_bytes_delivered() const;
  std::uint64_t total_msgs() const;

  /// Aggregate over all stages and ops for one pair.
  Counters pair_totals(Rank src, Rank dst) const;

  /// Bytes sent by entries matching a predicate over the tagged key.
  std::uint64_t bytes_where(const std::function<bool(const Key&)>& pred) const;
  std::uint64_t msgs_where(const std::function<bool(const Key&)>& pred) const;

  const std::map<Key, Counters>& entries() const { return entries_; }

  /// TSV: src, dst, msgs, bytes (aggregated over stages and ops, sorted).
  void dump_tsv(std::ostream& os) const;

  void clear() { entries_.clear(); }

 private:
  std::string stage_ = "init";
  std::map<Key, Counters> entries_;
};

/// Offsets of a contiguous partition of [0, n) into `parts` pieces whose
/// sizes differ by at most one.
class BlockPartition {
 public:
  BlockPartition() = default;
  BlockPartition(std::int64_t n, int parts) : n_(n), parts_(parts) {
    if (n < 0 || parts < 1) throw ConfigError("BlockPartition: need n >= 0 and parts >= 1");
  }

  std::int64_t begin(int part) const {
    const std::int64_t q = n_ / parts_;
    const std::int64_t r = n_ % parts_;
    return part * q + std::min<std::int64_t>(part, r);
  }
  std::int64_t end(int part) const { return begin(part + 1); }
  std::int64_t size(int part) const { return end(part) - begin(part); }
  int owner(std::int64_t index) const {
    const std::int64_t q = n_ / parts_;
    const std::int64_t r = n_ % parts_;
    const std::int64_t fat = (q + 1) * r;  // indices covered by the first r parts
    if (index < fat) return static_cast<int>(index / (q + 1));
    return static_cast<int>(r + (index - fat) / q);
  }

  std::int64_t total() const { return n_; }
  int parts() const { return parts_; }
  std::vector<std::int64_t> offsets() const;

 private:
  std::int64_t n_ = 0;
  int parts_ = 1;
};

/// Deterministic virtual sqrt(P) x sqrt(P) processor grid. Every collective
/// is one barrier-aligned superstep: the controller thread walks the ranks
/// in ascending order, so two runs with the same inputs produce identical
/// delivered payloads and identical ledgers regardless of host parallelism.
class Grid {
 public:
  static constexpr std::uint64_t kDefaultMaxMsgBytes = 64 * 1024;

  explicit Grid(int p_total, std::uint64_t max_msg_bytes = kDefaultMaxMsgBytes);

  int size() const { return p_total_; }
  int side() const { return side_; }
  std::uint64_t max_msg_bytes() const { return max_msg_bytes_; }

  Coord coords(Rank r) const { return {r / side_, r % side_}; }
  Rank rank_of(int row, int col) const { return row * side_ + col; }

  CommLedger& ledger() { return ledger_; }
  const CommLedger& ledger() const { return ledger_; }

  /// Ring allgather over one grid row. `contrib[c]` is the payload supplied
  /// by rank (row, c); every rank in the row observes the same concatenation
  /// ordered by column index. The ring schedule costs side*(side-1) logical
  /// messages; each fragment travels side-1 hops.
  Bytes row_allgather(int row, std::span<const Bytes> contrib);

  /// Rank (i,j) receives the payload supplied by rank (j,i). Diagonal ranks
  /// keep their own payload with zero ledger traffic.
  std::vector<Bytes> transpose_exchange(std::span<const Bytes> payload);

  /// Personalized all-to-all. outboxes[src][dst] -> inboxes[dst][src].
  /// Messages longer than max_msg_bytes are split into chunks and
  /// reassembled bit-identically; self-addressed traffic stays local.
  std::vector<std::vector<Bytes>> alltoall(const std::vector<std::vector<Bytes>>& outboxes);

  /// Element-wise sum of equal-length per-rank vectors; rank p keeps the
  /// slice [chunk_offsets[p], chunk_offsets[p+1]). All-zero slices are not
  /// transmitted.
  std::vector<std::vector<std::int64_t>> reduce_scatter(
      const std::vector<std::vector<std::int64_t>>& partials,
      const std::vector<std::int64_t>& chunk_offsets);

  /// Global OR of one flag per rank (flag exchange via alltoall).
  bool any_flag(const std::vector<std::uint8_t>& flags);

 private:
  // One chunked point-to-point message; src == dst is a local copy.
  void send(CommOp op, Rank src, Rank dst, std::uint64_t nbytes);

  int p_total_ = 1;
  int side_ = 1;
  std::uint64_t max_msg_bytes_ = kDefaultMaxMsgBytes;
  CommLedger ledger_;
};

/// Block distribution of a length-n index space over the grid: the space is
/// first split into `side` row bands (sizes within one of ceil(n/side)), and
/// band i is then split into `side` chunks owned by ranks (i, 0..side-1).
/// Concatenating the chunks of grid row i reproduces band i, which is what
/// lets a row allgather assemble per-band vector data.
class VectorLayout {
 public:
  VectorLayout() = default;
  VectorLayout(std::int64_t n, const Grid& grid);

  std::int64_t total() const { return n_; }
  int ranks() const { return side_ * side_; }

  std::int64_t chunk_begin(Rank r) const;
  std::int64_t chunk_end(Rank r) const;
  std::int64_t chunk_size(Rank r) const { return chunk_end(r) - chunk_begin(r); }
  Rank owner(std::int64_t index) const;

  std::int64_t band_begin(int band) const { return bands_.begin(band); }
  std::int64_t band_end(int band) const { return bands_.end(band); }

  std::vector<std::int64_t> chunk_offsets() const;

 private:
  std::int64_t n_ = 0;
  int side_ = 1;
  BlockPartition bands_;
};

}  // namespace contigforge

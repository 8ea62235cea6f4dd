#include "contigforge/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace contigforge {

const char* comm_op_name(CommOp op) {
  switch (op) {
    case CommOp::row_allgather: return "row_allgather";
    case CommOp::transpose: return "transpose";
    case CommOp::alltoall: return "alltoall";
    case CommOp::reduce_scatter: return "reduce_scatter";
  }
  return "unknown";
}

void CommLedger::record(CommOp op, Rank src, Rank dst, std::uint64_t msgs, std::uint64_t bytes) {
  Counters& c = entries_[Key{stage_, op, src, dst}];
  c.msgs += msgs;
  c.bytes_sent += bytes;
  c.bytes_delivered += bytes;  // delivery happens inside the same superstep
}

std::uint64_t CommLedger::total_bytes_sent() const {
  std::uint64_t total = 0;
  for (const auto& [key, c] : entries_) total += c.bytes_sent;
  return total;
}

std::uint64_t CommLedger::total_bytes_delivered() const {
  std::uint64_t total = 0;
  for (const auto& [key, c] : entries_) total += c.bytes_delivered;
  return total;
}

std::uint64_t CommLedger::total_msgs() const {
  std::uint64_t total = 0;
  for (const auto& [key, c] : entries_) total += c.msgs;
  return total;
}

CommLedger::Counters CommLedger::pair_totals(Rank src, Rank dst) const {
  Counters out;
  for (const auto& [key, c] : entries_) {
    if (key.src == src && key.dst == dst) {
      out.msgs += c.msgs;
      out.bytes_sent += c.bytes_sent;
      out.bytes_delivered += c.bytes_delivered;
    }
  }
  return out;
}

std::uint64_t CommLedger::bytes_where(const std::function<bool(const Key&)>& pred) const {
  std::uint64_t total = 0;
  for (const auto& [key, c] : entries_) {
    if (pred(key)) total += c.bytes_sent;
  }
  return total;
}

std::uint64_t CommLedger::msgs_where(const std::function<bool(const Key&)>& pred) const {
  std::uint64_t total = 0;
  for (const auto& [key, c] : entries_) {
    if (pred(key)) total += c.msgs;
  }
  return total;
}

void CommLedger::dump_tsv(std::ostream& os) const {
  std::map<std::pair<Rank, Rank>, Counters> agg;
  for (const auto& [key, c] : entries_) {
    Counters& a = agg[{key.src, key.dst}];
    a.msgs += c.msgs;
    a.bytes_sent += c.bytes_sent;
  }
  os << "src\tdst\tmsgs\tbytes\n";
  for (const auto& [pair, c] : agg) {
    os << pair.first << '\t' << pair.second << '\t' << c.msgs << '\t' << c.bytes_sent << '\n';
  }
}

std::vector<std::int64_t> BlockPartition::offsets() const {
  std::vector<std::int64_t> out(parts_ + 1);
  for (int p = 0; p <= parts_; ++p) out[p] = p == parts_ ? n_ : begin(p);
  return out;
}

Grid::Grid(int p_total, std::uint64_t max_msg_bytes)
    : p_total_(p_total), max_msg_bytes_(max_msg_bytes) {
  if (p_total < 1) throw NonSquareGrid("grid size must be positive, got " + std::to_string(p_total));
  if (max_msg_bytes < 1) throw ConfigError("max_msg_bytes must be >= 1");
  const int side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(p_total))));
  if (side * side != p_total) {
    throw NonSquareGrid("grid size " + std::to_string(p_total) + " is not a perfect square");
  }
  side_ = side;
}

void Grid::send(CommOp op, Rank src, Rank dst, std::uint64_t nbytes) {
  if (src == dst) return;  // local copy, no network traffic
  const std::uint64_t chunks = nbytes == 0 ? 1 : (nbytes + max_msg_bytes_ - 1) / max_msg_bytes_;
  ledger_.record(op, src, dst, chunks, nbytes);
}

Bytes Grid::row_allgather(int row, std::span<const Bytes> contrib) {
  if (row < 0 || row >= side_) throw OutOfBounds("row_allgather: bad row " + std::to_string(row));
  if (static_cast<int>(contrib.size()) != side_) {
    throw LengthMismatch("row_allgather: need one contribution per column");
  }
  // Ring schedule: side-1 rounds, each rank forwards the fragment it
  // received in the previous round to its right neighbor.
  for (int round = 0; round < side_ - 1; ++round) {
    for (int col = 0; col < side_; ++col) {
      const int frag = ((col - round) % side_ + side_) % side_;
      const Rank src = rank_of(row, col);
      const Rank dst = rank_of(row, (col + 1) % side_);
      send(CommOp::row_allgather, src, dst, contrib[frag].size());
    }
  }
  Bytes result;
  for (const Bytes& b : contrib) result += b;
  return result;
}

std::vector<Bytes> Grid::transpose_exchange(std::span<const Bytes> payload) {
  if (static_cast<int>(payload.size()) != p_total_) {
    throw LengthMismatch("transpose_exchange: need one payload per rank");
  }
  std::vector<Bytes> received(p_total_);
  for (Rank r = 0; r < p_total_; ++r) {
    const Coord c = coords(r);
    const Rank mate = rank_of(c.col, c.row);
    received[r] = payload[mate];
    if (mate != r) send(CommOp::transpose, mate, r, payload[mate].size());
  }
  return received;
}

std::vector<std::vector<Bytes>> Grid::alltoall(const std::vector<std::vector<Bytes>>& outboxes) {
  if (static_cast<int>(outboxes.size()) != p_total_) {
    throw LengthMismatch("alltoall: need one outbox set per rank");
  }
  std::vector<std::vector<Bytes>> inboxes(p_total_, std::vector<Bytes>(p_total_));
  for (Rank src = 0; src < p_total_; ++src) {
    if (static_cast<int>(outboxes[src].size()) != p_total_) {
      throw LengthMismatch("alltoall: outbox of rank " + std::to_string(src) +
                           " must address every rank");
    }
    for (Rank dst = 0; dst < p_total_; ++dst) {
      const Bytes& msg = outboxes[src][dst];
      if (!msg.empty() || src == dst) {
        if (!msg.empty()) send(CommOp::alltoall, src, dst, msg.size());
        inboxes[dst][src] = msg;
      }
    }
  }
  return inboxes;
}

std::vector<std::vector<std::int64_t>> Grid::reduce_scatter(
    const std::vector<std::vector<std::int64_t>>& partials,
    const std::vector<std::int64_t>& chunk_offsets) {
  if (static_cast<int>(partials.size()) != p_total_) {
    throw LengthMismatch("reduce_scatter: need one partial vector per rank");
  }
  if (static_cast<int>(chunk_offsets.size()) != p_total_ + 1) {
    throw LengthMismatch("reduce_scatter: chunk_offsets must have P+1 entries");
  }
  const std::size_t n = partials.empty() ? 0 : partials[0].size();
  for (const auto& v : partials) {
    if (v.size() != n) throw LengthMismatch("reduce_scatter: partial vectors differ in length");
  }
  if (chunk_offsets.back() != static_cast<std::int64_t>(n)) {
    throw LengthMismatch("reduce_scatter: ownership does not cover the vector");
  }

  std::vector<std::vector<std::int64_t>> slices(p_total_);
  for (Rank owner = 0; owner < p_total_; ++owner) {
    const std::int64_t lo = chunk_offsets[owner];
    const std::int64_t hi = chunk_offsets[owner + 1];
    std::vector<std::int64_t> sum(hi - lo, 0);
    for (Rank src = 0; src < p_total_; ++src) {
      bool nonzero = false;
      for (std::int64_t i = lo; i < hi; ++i) {
        sum[i - lo] += partials[src][i];
        nonzero |= partials[src][i] != 0;
      }
      if (nonzero && src != owner) {
        send(CommOp::reduce_scatter, src, owner, (hi - lo) * sizeof(std::int64_t));
      }
    }
    slices[owner] = std::move(sum);
  }
  return slices;
}

bool Grid::any_flag(const std::vector<std::uint8_t>& flags) {
  if (static_cast<int>(flags.size()) != p_total_) {
    throw LengthMismatch("any_flag: need one flag per rank");
  }
  std::vector<std::vector<Bytes>> out(p_total_, std::vector<Bytes>(p_total_));
  for (Rank src = 0; src < p_total_; ++src) {
    for (Rank dst = 0; dst < p_total_; ++dst) {
      out[src][dst] = Bytes(1, static_cast<char>(flags[src]));
    }
  }
  auto in = alltoall(out);
  bool any = false;
  for (Rank dst = 0; dst < p_total_; ++dst) {
    for (Rank src = 0; src < p_total_; ++src) any |= in[dst][src][0] != 0;
  }
  return any;
}

VectorLayout::VectorLayout(std::int64_t n, const Grid& grid)
    : n_(n), side_(grid.side()), bands_(n, grid.side()) {}

std::int64_t VectorLayout::chunk_begin(Rank r) const {
  const int band = r / side_;
  const int within = r % side_;
  const BlockPartition part(bands_.size(band), side_);
  return bands_.begin(band) + part.begin(within);
}

std::int64_t VectorLayout::chunk_end(Rank r) const {
  const int band = r / side_;
  const int within = r % side_;
  const BlockPartition part(bands_.size(band), side_);
  return bands_.begin(band) + part.end(within);
}

Rank VectorLayout::owner(std::int64_t index) const {
  const int band = bands_.owner(index);
  const BlockPartition part(bands_.size(band), side_);
  return band * side_ + part.owner(index - bands_.begin(band));
}

std::vector<std::int64_t> VectorLayout::chunk_offsets() const {
  std::vector<std::int64_t> out(ranks() + 1);
  for (Rank r = 0; r < ranks(); ++r) out[r] = chunk_begin(r);
  out[ranks()] = n_;
  return out;
}

}  // namespace contigforge

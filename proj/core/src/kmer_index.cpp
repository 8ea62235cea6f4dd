#include "contigforge/kmer_index.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace contigforge {

namespace {

int base_code(char b) {
  switch (b) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
  }
  throw AlphabetError(std::string("base '") + b + "' is not one of A,C,G,T");
}

constexpr char kBases[] = {'A', 'C', 'G', 'T'};

}  // namespace

std::uint64_t pack_kmer(std::string_view bases) {
  std::uint64_t code = 0;
  for (char b : bases) code = (code << 2) | static_cast<std::uint64_t>(base_code(b));
  return code;
}

std::string unpack_kmer(std::uint64_t code, int k) {
  std::string out(k, 'A');
  for (int i = k - 1; i >= 0; --i) {
    out[i] = kBases[code & 3];
    code >>= 2;
  }
  return out;
}

std::uint64_t reverse_complement_code(std::uint64_t code, int k) {
  std::uint64_t out = 0;
  for (int i = 0; i < k; ++i) {
    out = (out << 2) | ((code & 3) ^ 3);
    code >>= 2;
  }
  return out;
}

KmerIndex kmer_matrix(Grid& grid, const ReadStore& store, int k, int max_kmer_freq) {
  if (k < 1 || k % 2 == 0) throw ConfigError("k must be odd and positive, got " + std::to_string(k));
  if (k > 31) throw ConfigError("k larger than 31 is not supported by the packed encoding");
  for (std::size_t i = 0; i < store.size(); ++i) {
    if (store.entry_at(i).length < static_cast<std::uint32_t>(k)) {
      throw KTooLarge("read '" + store.entry_at(i).name + "' is shorter than k=" +
                      std::to_string(k));
    }
  }
  grid.ledger().set_stage("kmer_matrix");

  // Every canonical occurrence, then one sort groups them by code and read.
  struct Occurrence {
    std::uint64_t code;
    std::int64_t read;
    std::uint32_t pos;
    std::uint8_t rc;
  };
  std::vector<Occurrence> occurrences;
  const std::uint64_t mask = (1ull << (2 * k)) - 1;
  const int high_shift = 2 * (k - 1);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& entry = store.entry_at(i);
    const std::string_view seq = store.bases(entry.id);
    std::uint64_t fwd = pack_kmer(seq.substr(0, k));
    std::uint64_t rc = reverse_complement_code(fwd, k);
    for (std::int64_t pos = 0;; ++pos) {
      const std::uint64_t canon = std::min(fwd, rc);
      occurrences.push_back({canon, entry.id, static_cast<std::uint32_t>(pos),
                             static_cast<std::uint8_t>(canon != fwd)});
      if (pos + k >= static_cast<std::int64_t>(seq.size())) break;
      const std::uint64_t next = static_cast<std::uint64_t>(base_code(seq[pos + k]));
      fwd = ((fwd << 2) | next) & mask;
      rc = (rc >> 2) | ((next ^ 3) << high_shift);
    }
  }
  std::sort(occurrences.begin(), occurrences.end(), [](const Occurrence& a, const Occurrence& b) {
    return std::tie(a.code, a.read, a.pos) < std::tie(b.code, b.read, b.pos);
  });

  // Reliable-range filter: drop k-mers present in too many reads.
  KmerIndex index;
  index.k = k;
  std::vector<Triple<KmerHits>> triples;
  for (std::size_t at = 0; at < occurrences.size();) {
    std::size_t end = at;
    int reads_with = 0;
    std::int64_t prev_read = -1;
    while (end < occurrences.size() && occurrences[end].code == occurrences[at].code) {
      reads_with += occurrences[end].read != prev_read;
      prev_read = occurrences[end].read;
      ++end;
    }
    if (reads_with <= max_kmer_freq) {
      const std::int64_t col = static_cast<std::int64_t>(index.column_kmers.size());
      index.column_kmers.push_back(occurrences[at].code);
      for (std::size_t i = at; i < end;) {
        Triple<KmerHits> t{occurrences[i].read, col, {}};
        while (i < end && occurrences[i].read == t.row) {
          t.value.push({occurrences[i].pos, occurrences[i].rc});
          ++i;
        }
        triples.push_back(std::move(t));
      }
    }
    at = end;
  }

  index.matrix = DistSparseMatrix<KmerHits>::from_triples(
      grid, static_cast<std::int64_t>(store.size()),
      static_cast<std::int64_t>(index.column_kmers.size()), triples);
  return index;
}

DistSparseMatrix<OverlapCandidate> candidate_overlaps(const KmerIndex& index) {
  index.matrix.grid().ledger().set_stage("candidate_overlaps");
  const auto at = transpose(index.matrix);
  auto mul = [](const KmerHits& a, const KmerHits& b) -> std::optional<OverlapCandidate> {
    OverlapCandidate c;
    c.count = 1;
    c.pos_src = a.first.pos;
    c.pos_dst = b.first.pos;
    c.same_strand = a.first.rc == b.first.rc;
    return c;
  };
  auto add = [](OverlapCandidate& acc, const OverlapCandidate& c) {
    acc.count += c.count;
    if (std::pair(c.pos_src, c.pos_dst) < std::pair(acc.pos_src, acc.pos_dst)) {
      acc.pos_src = c.pos_src;
      acc.pos_dst = c.pos_dst;
      acc.same_strand = c.same_strand;
    }
  };
  auto keep = [](std::int64_t u, std::int64_t w, const OverlapCandidate&) { return u != w; };
  return spgemm<KmerHits, KmerHits, OverlapCandidate>(index.matrix, at, mul, add, keep);
}

}  // namespace contigforge

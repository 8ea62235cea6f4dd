#pragma once

#include <cstdint>
#include <vector>

#include "contigforge/dist_matrix.hpp"
#include "contigforge/read_store.hpp"

namespace contigforge {

/// One occurrence of a canonical k-mer in a read. `rc` is set when the
/// read carries the reverse complement of the canonical form.
struct KmerHit {
  std::uint32_t pos = 0;
  std::uint8_t rc = 0;
};

/// All occurrences of one canonical k-mer in one read, sorted by position.
/// The first hit lives inline: almost every k-mer occurs once per read,
/// and the overlap product only touches the first occurrence.
struct KmerHits {
  KmerHit first;
  std::vector<KmerHit> extra;

  std::size_t size() const { return extra.empty() ? 1 : extra.size() + 1; }
  KmerHit hit(std::size_t i) const { return i == 0 ? first : extra[i - 1]; }
  void push(KmerHit h) {
    if (count_ == 0) {
      first = h;
    } else {
      extra.push_back(h);
    }
    ++count_;
  }

 private:
  std::uint32_t count_ = 0;
};

template <>
struct Codec<KmerHits> {
  static void encode(Bytes& out, const KmerHits& v) {
    const std::uint32_t n = static_cast<std::uint32_t>(v.size());
    out.append(reinterpret_cast<const char*>(&n), sizeof(n));
    for (std::uint32_t i = 0; i < n; ++i) {
      const KmerHit h = v.hit(i);
      out.append(reinterpret_cast<const char*>(&h.pos), sizeof(h.pos));
      out.push_back(static_cast<char>(h.rc));
    }
  }
  static KmerHits decode(const char*& p) {
    std::uint32_t n;
    std::memcpy(&n, p, sizeof(n));
    p += sizeof(n);
    KmerHits v;
    for (std::uint32_t i = 0; i < n; ++i) {
      KmerHit h;
      std::memcpy(&h.pos, p, sizeof(std::uint32_t));
      p += sizeof(std::uint32_t);
      h.rc = static_cast<std::uint8_t>(*p++);
      v.push(h);
    }
    return v;
  }
};

/// Reads-by-kmers presence matrix plus the column dictionary. Columns are
/// canonical k-mers (lexicographic min of the k-mer and its reverse
/// complement) in sorted order; k-mers hitting more reads than the
/// frequency cap are dropped before the matrix is built.
struct KmerIndex {
  int k = 0;
  std::vector<std::uint64_t> column_kmers;  // packed canonical codes, ascending
  DistSparseMatrix<KmerHits> matrix;        // |reads| x |column_kmers|
};

std::uint64_t pack_kmer(std::string_view bases);
std::string unpack_kmer(std::uint64_t code, int k);
std::uint64_t reverse_complement_code(std::uint64_t code, int k);

KmerIndex kmer_matrix(Grid& grid, const ReadStore& store, int k, int max_kmer_freq);

/// Candidate overlap payload: shared canonical k-mer count plus one
/// representative seed (smallest (pos_src, pos_dst) pair).
struct OverlapCandidate {
  std::uint32_t count = 0;
  std::uint32_t pos_src = 0;
  std::uint32_t pos_dst = 0;
  std::uint8_t same_strand = 1;
};

template <>
struct Codec<OverlapCandidate> {
  static void encode(Bytes& out, const OverlapCandidate& c) {
    out.append(reinterpret_cast<const char*>(&c.count), sizeof(c.count));
    out.append(reinterpret_cast<const char*>(&c.pos_src), sizeof(c.pos_src));
    out.append(reinterpret_cast<const char*>(&c.pos_dst), sizeof(c.pos_dst));
    out.push_back(static_cast<char>(c.same_strand));
  }
  static OverlapCandidate decode(const char*& p) {
    OverlapCandidate c;
    std::memcpy(&c.count, p, sizeof(c.count));
    p += sizeof(c.count);
    std::memcpy(&c.pos_src, p, sizeof(c.pos_src));
    p += sizeof(c.pos_src);
    std::memcpy(&c.pos_dst, p, sizeof(c.pos_dst));
    p += sizeof(c.pos_dst);
    c.same_strand = static_cast<std::uint8_t>(*p++);
    return c;
  }
};

/// C = A * A^T restricted off the diagonal.
DistSparseMatrix<OverlapCandidate> candidate_overlaps(const KmerIndex& index);

}  // namespace contigforge

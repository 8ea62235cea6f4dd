#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "contigforge/errors.hpp"
#include "contigforge/grid.hpp"

namespace contigforge {

inline char complement_base(char b) {
  switch (b) {
    case 'A': return 'T';
    case 'T': return 'A';
    case 'C': return 'G';
    case 'G': return 'C';
  }
  throw AlphabetError(std::string("base '") + b + "' is not one of A,C,G,T");
}

std::string reverse_complement(std::string_view s);
bool valid_bases(std::string_view s);

/// Read sequences packed into one byte buffer with an offset table.
/// Slicing is offset arithmetic into the buffer; inclusive indices, and a
/// descending index pair yields the reverse complement.
class ReadStore {
 public:
  struct Entry {
    std::int64_t id = 0;
    std::uint64_t offset = 0;
    std::uint32_t length = 0;
    std::string name;
  };

  /// One read per record, ids assigned by file order, bases upper-cased.
  /// Throws ParseError on malformed records and AlphabetError (naming the
  /// record) on symbols outside {A,C,G,T}.
  static ReadStore from_fasta(const std::string& path);
  static ReadStore from_fasta_stream(std::istream& in, const std::string& origin);

  void append(std::int64_t id, std::string name, std::string_view bases);

  std::size_t size() const { return entries_.size(); }
  bool has(std::int64_t id) const { return index_.contains(id); }
  const Entry& entry_at(std::size_t i) const { return entries_[i]; }

  std::int64_t length(std::int64_t id) const { return find(id).length; }
  const std::string& name(std::int64_t id) const { return find(id).name; }
  std::string_view bases(std::int64_t id) const;

  /// Inclusive slice l[i:j]: forward substring when i <= j, reverse
  /// complement read from i down to j when i > j.
  std::string slice(std::int64_t id, std::int64_t i, std::int64_t j) const;

  std::uint64_t buffer_bytes() const { return buffer_.size(); }

 private:
  const Entry& find(std::int64_t id) const;

  std::string buffer_;
  std::vector<Entry> entries_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

/// Move whole reads to their assigned ranks over the grid. stores[r] is the
/// current store of rank r; the result holds exactly the reads assigned to
/// each rank, bit-identical. Reads already resident move zero network
/// bytes. Throws UnassignedRead when a present read has no destination.
std::vector<ReadStore> exchange_reads(Grid& grid, const std::vector<ReadStore>& stores,
                                      const std::unordered_map<std::int64_t, Rank>& assignment);

/// Split a global store into per-rank stores following the banded vector
/// layout (the pipeline's initial residency).
std::vector<ReadStore> scatter_reads(const Grid& grid, const ReadStore& store,
                                     const VectorLayout& layout);

void write_fasta(std::ostream& os, std::string_view name, std::string_view seq,
                 std::size_t wrap = 80);

}  // namespace contigforge

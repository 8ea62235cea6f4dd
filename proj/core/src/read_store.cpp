#include "contigforge/read_store.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace contigforge {

std::string reverse_complement(std::string_view s) {
  std::string out(s.size(), '\0');
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[s.size() - 1 - i] = complement_base(s[i]);
  }
  return out;
}

bool valid_bases(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char b) { return b == 'A' || b == 'C' || b == 'G' || b == 'T'; });
}

ReadStore ReadStore::from_fasta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FASTA file " + path);
  return from_fasta_stream(in, path);
}

ReadStore ReadStore::from_fasta_stream(std::istream& in, const std::string& origin) {
  ReadStore store;
  std::string line, name, seq;
  std::int64_t next_id = 0;
  bool have_record = false;

  auto flush = [&]() {
    if (!have_record) return;
    if (seq.empty()) throw ParseError(origin + ": record '" + name + "' is empty");
    if (!valid_bases(seq)) {
      throw AlphabetError(origin + ": record '" + name + "' contains a base outside A,C,G,T");
    }
    store.append(next_id++, name, seq);
    seq.clear();
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      name = line.substr(1);
      if (name.empty()) throw ParseError(origin + ": FASTA header without a name");
      have_record = true;
    } else {
      if (!have_record) throw ParseError(origin + ": sequence data before any header");
      for (char& c : line) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      seq += line;
    }
  }
  flush();
  return store;
}

void ReadStore::append(std::int64_t id, std::string name, std::string_view bases) {
  if (index_.contains(id)) throw ParseError("duplicate read id " + std::to_string(id));
  Entry e;
  e.id = id;
  e.offset = buffer_.size();
  e.length = static_cast<std::uint32_t>(bases.size());
  e.name = std::move(name);
  buffer_.append(bases);
  index_[id] = entries_.size();
  entries_.push_back(std::move(e));
}

const ReadStore::Entry& ReadStore::find(std::int64_t id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw OutOfBounds("read id " + std::to_string(id) + " not in store");
  return entries_[it->second];
}

std::string_view ReadStore::bases(std::int64_t id) const {
  const Entry& e = find(id);
  return std::string_view(buffer_).substr(e.offset, e.length);
}

std::string ReadStore::slice(std::int64_t id, std::int64_t i, std::int64_t j) const {
  const Entry& e = find(id);
  const std::int64_t len = e.length;
  if (i < 0 || i >= len || j < 0 || j >= len) {
    throw OutOfBounds("slice [" + std::to_string(i) + ":" + std::to_string(j) +
                      "] out of range for read of length " + std::to_string(len));
  }
  const std::string_view whole(buffer_.data() + e.offset, e.length);
  if (i <= j) return std::string(whole.substr(i, j - i + 1));
  std::string out(i - j + 1, '\0');
  for (std::int64_t k = i; k >= j; --k) out[i - k] = complement_base(whole[k]);
  return out;
}

namespace {

void encode_read(Bytes& out, std::int64_t id, std::string_view seq) {
  out.append(reinterpret_cast<const char*>(&id), sizeof(id));
  const std::uint32_t len = static_cast<std::uint32_t>(seq.size());
  out.append(reinterpret_cast<const char*>(&len), sizeof(len));
  out.append(seq);
}

void decode_reads(const Bytes& buf, std::vector<std::pair<std::int64_t, std::string>>& out) {
  const char* p = buf.data();
  const char* end = p + buf.size();
  while (p != end) {
    std::int64_t id;
    std::uint32_t len;
    std::memcpy(&id, p, sizeof(id));
    p += sizeof(id);
    std::memcpy(&len, p, sizeof(len));
    p += sizeof(len);
    out.emplace_back(id, std::string(p, len));
    p += len;
  }
}

}  // namespace

std::vector<ReadStore> exchange_reads(Grid& grid, const std::vector<ReadStore>& stores,
                                      const std::unordered_map<std::int64_t, Rank>& assignment) {
  if (static_cast<int>(stores.size()) != grid.size()) {
    throw LengthMismatch("exchange_reads: need one store per rank");
  }
  std::vector<std::vector<Bytes>> outboxes(grid.size(), std::vector<Bytes>(grid.size()));
  // Reads that stay resident are carried over directly.
  std::vector<std::vector<std::pair<std::int64_t, std::string>>> staying(grid.size());

  for (Rank r = 0; r < grid.size(); ++r) {
    for (std::size_t i = 0; i < stores[r].size(); ++i) {
      const auto& e = stores[r].entry_at(i);
      const auto it = assignment.find(e.id);
      if (it == assignment.end()) {
        throw UnassignedRead("read " + std::to_string(e.id) + " has no destination rank");
      }
      const Rank dst = it->second;
      if (dst < 0 || dst >= grid.size()) {
        throw OutOfBounds("read " + std::to_string(e.id) + " assigned to invalid rank");
      }
      if (dst == r) {
        staying[r].emplace_back(e.id, std::string(stores[r].bases(e.id)));
      } else {
        encode_read(outboxes[r][dst], e.id, stores[r].bases(e.id));
      }
    }
  }

  const auto inboxes = grid.alltoall(outboxes);

  std::vector<ReadStore> result(grid.size());
  for (Rank r = 0; r < grid.size(); ++r) {
    std::vector<std::pair<std::int64_t, std::string>> mine = std::move(staying[r]);
    for (Rank src = 0; src < grid.size(); ++src) decode_reads(inboxes[r][src], mine);
    std::sort(mine.begin(), mine.end());
    for (auto& [id, seq] : mine) result[r].append(id, "", seq);
  }
  return result;
}

std::vector<ReadStore> scatter_reads(const Grid& grid, const ReadStore& store,
                                     const VectorLayout& layout) {
  std::vector<ReadStore> result(grid.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& e = store.entry_at(i);
    result[layout.owner(e.id)].append(e.id, e.name, store.bases(e.id));
  }
  return result;
}

void write_fasta(std::ostream& os, std::string_view name, std::string_view seq,
                 std::size_t wrap) {
  os << '>' << name << '\n';
  for (std::size_t i = 0; i < seq.size(); i += wrap) {
    os << seq.substr(i, wrap) << '\n';
  }
  if (seq.empty()) os << '\n';
}

}  // namespace contigforge

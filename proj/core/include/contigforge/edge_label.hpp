#pragma once

#include <cstdint>
#include <string>

#include "contigforge/errors.hpp"

namespace contigforge {

/// Bidirected direction code for an overlap edge u -> v, two bits:
/// bit 1 set  = the overlap reaches the suffix (end) of the source read,
/// bit 0 set  = the overlap reaches the suffix of the destination read.
/// A walk exits a read through its suffix when the read is used forward and
/// through its prefix when used reverse-complemented, so:
///   suffix_prefix (10): u forward, v forward       (same strand)
///   prefix_suffix (01): u reversed, v reversed     (same strand)
///   suffix_suffix (11): u forward, v reversed      (opposite strands)
///   prefix_prefix (00): u reversed, v forward      (opposite strands)
enum class EdgeDir : std::uint8_t {
  prefix_prefix = 0,
  prefix_suffix = 1,
  suffix_prefix = 2,
  suffix_suffix = 3,
};

inline bool src_uses_suffix(EdgeDir d) { return (static_cast<int>(d) & 2) != 0; }
inline bool dst_uses_suffix(EdgeDir d) { return (static_cast<int>(d) & 1) != 0; }
inline EdgeDir make_dir(bool src_suffix, bool dst_suffix) {
  return static_cast<EdgeDir>((src_suffix ? 2 : 0) | (dst_suffix ? 1 : 0));
}

/// A walk through an interior read must enter through one end and leave
/// through the other: the destination end of the incoming edge and the
/// source end of the outgoing edge must differ.
inline bool walk_compatible(EdgeDir incoming, EdgeDir outgoing) {
  return dst_uses_suffix(incoming) != src_uses_suffix(outgoing);
}

/// Direction implied for the shortcut edge u -> w of a two-hop walk u -> v -> w.
inline EdgeDir compose_dir(EdgeDir first, EdgeDir second) {
  return make_dir(src_uses_suffix(first), dst_uses_suffix(second));
}

/// Payload of a string-graph nonzero (u, v), expressed for the walk u then v.
/// pre  = index in l_u of the last base before the overlap, in walk order;
/// post = index in l_v of the first base of the overlap, in walk order;
/// both are original-read coordinates (inclusive slicing handles the
/// reverse-complement cases). overhang = bases of l_v past the overlap in
/// walk direction. pre is -1 only on containment edges, which exist
/// transiently between the alignment filter and the containment prune.
struct EdgeLabel {
  EdgeDir dir = EdgeDir::suffix_prefix;
  std::uint32_t overhang = 0;
  std::int32_t pre = 0;
  std::int32_t post = 0;

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

/// Inclusive overlap coordinates on both reads plus the strand relation;
/// the working form inside the alignment filter.
struct OverlapCoords {
  std::int64_t src_begin = 0, src_end = 0;  // inclusive span on the source read
  std::int64_t dst_begin = 0, dst_end = 0;  // inclusive span on the destination read
  bool same_strand = true;
};

inline std::int64_t overlap_length(const OverlapCoords& o) {
  return o.src_end - o.src_begin + 1;
}

/// Build the label of edge (u, v) from overlap coordinates.
inline EdgeLabel label_from_coords(const OverlapCoords& o, std::int64_t len_src,
                                   std::int64_t len_dst) {
  // Touching the suffix wins on the source side, the prefix on the
  // destination side; only degenerate (containment) overlaps touch both.
  const bool s_src = o.src_end == len_src - 1;
  const bool s_dst = o.dst_begin != 0;
  EdgeLabel e;
  e.dir = make_dir(s_src, s_dst);
  e.pre = static_cast<std::int32_t>(s_src ? o.src_begin - 1 : o.src_end + 1);
  e.post = static_cast<std::int32_t>(s_dst ? o.dst_end : o.dst_begin);
  e.overhang = static_cast<std::uint32_t>(s_dst ? o.dst_begin : len_dst - 1 - o.dst_end);
  return e;
}

/// Reconstruct the overlap coordinates a label was built from.
inline OverlapCoords coords_from_label(const EdgeLabel& e, std::int64_t len_src,
                                       std::int64_t len_dst) {
  OverlapCoords o;
  const bool s_src = src_uses_suffix(e.dir);
  const bool s_dst = dst_uses_suffix(e.dir);
  const std::int64_t ovlen = s_dst ? e.post - static_cast<std::int64_t>(e.overhang) + 1
                                   : len_dst - static_cast<std::int64_t>(e.overhang) - e.post;
  if (s_dst) {
    o.dst_end = e.post;
    o.dst_begin = o.dst_end - ovlen + 1;
  } else {
    o.dst_begin = e.post;
    o.dst_end = o.dst_begin + ovlen - 1;
  }
  if (s_src) {
    o.src_begin = e.pre + 1;
    o.src_end = o.src_begin + ovlen - 1;
  } else {
    o.src_end = e.pre - 1;
    o.src_begin = o.src_end - ovlen + 1;
  }
  // Suffix/prefix use on each side implies the strand relation.
  o.same_strand = s_src != s_dst;
  (void)len_src;
  return o;
}

inline std::int64_t overlap_length(const EdgeLabel& e, std::int64_t len_dst) {
  return dst_uses_suffix(e.dir) ? e.post - static_cast<std::int64_t>(e.overhang) + 1
                                : len_dst - static_cast<std::int64_t>(e.overhang) - e.post;
}

/// The overlap spans the whole source read: the source is contained.
inline bool src_contained(const EdgeLabel& e, std::int64_t len_src, std::int64_t len_dst) {
  return overlap_length(e, len_dst) == len_src;
}

/// Zero walk-direction overhang means the overlap reaches the far end of the
/// destination read too: the destination is contained.
inline bool dst_contained(const EdgeLabel& e) { return e.overhang == 0; }

/// The same overlap seen from the other endpoint: the label of (v, u).
/// The direction bits swap position (the overlap touches the same physical
/// end of each read either way); they are carried over rather than
/// re-derived so that early-ended overlap coordinates survive the mirror.
inline EdgeLabel mirror_label(const EdgeLabel& e, std::int64_t len_src, std::int64_t len_dst) {
  const OverlapCoords o = coords_from_label(e, len_src, len_dst);
  const bool s_src = dst_uses_suffix(e.dir);  // flag of v, now the source
  const bool s_dst = src_uses_suffix(e.dir);  // flag of u, now the destination
  EdgeLabel m;
  m.dir = make_dir(s_src, s_dst);
  m.pre = static_cast<std::int32_t>(s_src ? o.dst_begin - 1 : o.dst_end + 1);
  m.post = static_cast<std::int32_t>(s_dst ? o.src_end : o.src_begin);
  m.overhang = static_cast<std::uint32_t>(s_dst ? o.src_begin : len_src - 1 - o.src_end);
  return m;
}

/// Bounds check used after the containment prune, when every surviving
/// label must describe a proper overlap.
inline bool label_in_bounds(const EdgeLabel& e, std::int64_t len_src, std::int64_t len_dst) {
  return e.pre >= 0 && e.pre < len_src && e.post >= 0 && e.post < len_dst && e.overhang > 0;
}

}  // namespace contigforge

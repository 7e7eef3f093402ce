#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "rrtsim/tree.hpp"

namespace rrtsim {

/// Provenance recorded in a tree dump next to the structural data.
struct DumpMeta {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string generator_name = RngStream::kGeneratorName;
  int version = 1;
};

struct TreeFile {
  Tree tree;
  DumpMeta meta;
};

/// Tree dump format, line oriented:
///   line 1: JSON header {kind, d, epsilon, seed, stream, generator_name,
///           version} (+ base_count for connection trees), sorted keys;
///   line 2: column header "step,parent,depth,edge_length,x0,...";
///   then one record per vertex in insertion order.
/// Doubles are written with shortest round-trip decimals, so
/// dump(load(dump(t))) is byte-identical to dump(t).
void dump_tree(const Tree& t, const DumpMeta& meta, std::ostream& os);
std::string dump_tree_string(const Tree& t, const DumpMeta& meta);

/// Parses and validates a dump (structure, ranges, and that every stored
/// edge length reproduces bit-for-bit from the stored positions).  Throws
/// std::runtime_error with a line-numbered message on malformed input.
TreeFile load_tree(std::istream& is);
TreeFile load_tree_string(const std::string& text);

/// Shortest round-trip decimal for a double (the repo-wide float format).
std::string format_double(double v);

}  // namespace rrtsim

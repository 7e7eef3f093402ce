#include "rrtsim/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "json.hpp"

namespace rrtsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("tree dump line " + std::to_string(line_no) + ": " + what);
}

// split a record line at commas (no quoting in this format)
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no, const char* what) {
  T value{};
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    fail(line_no, std::string("bad ") + what + " field '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void dump_tree(const Tree& t, const DumpMeta& meta, std::ostream& os) {
  json header;
  header["kind"] = to_string(t.kind());
  header["d"] = t.dim();
  header["epsilon"] = t.epsilon();
  header["seed"] = meta.seed;
  header["stream"] = meta.stream;
  header["generator_name"] = meta.generator_name;
  header["version"] = meta.version;
  if (t.kind() == TreeKind::connection) header["base_count"] = t.base_count();
  os << header.dump() << '\n';  // nlohmann emits sorted keys: deterministic

  os << "step,parent,depth,edge_length";
  for (int i = 0; i < t.dim(); ++i) os << ",x" << i;
  os << '\n';

  std::string line;
  for (std::size_t i = 0; i < t.size(); ++i) {
    line.clear();
    line += std::to_string(i);
    line += ',';
    line += std::to_string(t.parent(i));
    line += ',';
    line += std::to_string(t.depth(i));
    line += ',';
    line += format_double(t.edge_length(i));
    const double* pos = t.position(i);
    for (int k = 0; k < t.dim(); ++k) {
      line += ',';
      line += format_double(pos[k]);
    }
    line += '\n';
    os << line;
  }
}

std::string dump_tree_string(const Tree& t, const DumpMeta& meta) {
  std::ostringstream os;
  dump_tree(t, meta, os);
  return os.str();
}

TreeFile load_tree(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(1, "missing JSON header");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(1, std::string("header is not valid JSON: ") + e.what());
  }
  for (const char* key : {"kind", "d", "epsilon", "seed", "stream", "generator_name", "version"}) {
    if (!header.contains(key)) fail(1, std::string("header missing key '") + key + "'");
  }
  const auto kind = tree_kind_from_string(header["kind"].get<std::string>());
  if (!kind) fail(1, "unknown kind '" + header["kind"].get<std::string>() + "'");
  const int dim = header["d"].get<int>();
  const double epsilon = header["epsilon"].get<double>();
  std::size_t base_count = 0;
  if (*kind == TreeKind::connection) {
    if (!header.contains("base_count")) fail(1, "connection header missing base_count");
    base_count = header["base_count"].get<std::size_t>();
  }

  TreeFile out{Tree::restore(*kind, dim, epsilon, base_count), DumpMeta{}};
  out.meta.seed = header["seed"].get<std::uint64_t>();
  out.meta.stream = header["stream"].get<std::uint64_t>();
  out.meta.generator_name = header["generator_name"].get<std::string>();
  out.meta.version = header["version"].get<int>();

  if (!std::getline(is, line)) fail(2, "missing column header");
  {
    std::string expect = "step,parent,depth,edge_length";
    for (int i = 0; i < dim; ++i) expect += ",x" + std::to_string(i);
    if (line != expect) fail(2, "column header mismatch (expected '" + expect + "')");
  }

  std::size_t line_no = 2;
  std::size_t next_step = 0;
  double pos[kMaxDim];
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) fail(line_no, "empty record");
    const auto fields = split_fields(line);
    if (fields.size() != 4 + static_cast<std::size_t>(dim)) {
      fail(line_no, "expected " + std::to_string(4 + dim) + " fields, got " +
                        std::to_string(fields.size()));
    }
    const auto step = parse_number<std::size_t>(fields[0], line_no, "step");
    if (step != next_step) fail(line_no, "steps must be contiguous from 0");
    const auto parent = parse_number<std::int64_t>(fields[1], line_no, "parent");
    const auto depth = parse_number<std::int32_t>(fields[2], line_no, "depth");
    const auto edge = parse_number<double>(fields[3], line_no, "edge_length");
    for (int k = 0; k < dim; ++k) {
      pos[k] = parse_number<double>(fields[4 + static_cast<std::size_t>(k)], line_no, "coordinate");
      if (!(pos[k] >= 0.0 && pos[k] <= 1.0)) fail(line_no, "coordinate outside [0,1]");
    }
    std::size_t idx;
    try {
      idx = out.tree.append(pos, parent, edge);
    } catch (const std::invalid_argument& e) {
      fail(line_no, e.what());
    }
    if (out.tree.depth(idx) != depth) fail(line_no, "depth disagrees with parent chain");
    // stored lengths must reproduce exactly from the stored positions
    const double recomputed =
        parent < 0 ? 0.0
                   : std::sqrt(sq_dist(out.tree.position(static_cast<std::size_t>(parent)),
                                       out.tree.position(idx), dim));
    if (recomputed != edge) fail(line_no, "edge_length does not match the stored positions");
    ++next_step;
  }
  if (out.tree.size() == 0) fail(line_no + 1, "dump holds no vertices");
  if (*kind == TreeKind::connection && out.tree.base_count() > out.tree.size()) {
    fail(line_no, "base_count exceeds vertex count");
  }
  return out;
}

TreeFile load_tree_string(const std::string& text) {
  std::istringstream is(text);
  return load_tree(is);
}

}  // namespace rrtsim

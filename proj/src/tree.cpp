#include "rrtsim/tree.hpp"

#include <cmath>
#include <stdexcept>

namespace rrtsim {

std::string to_string(TreeKind k) {
  switch (k) {
    case TreeKind::rrt: return "rrt";
    case TreeKind::nnt: return "nnt";
    case TreeKind::connection: return "connection";
  }
  return "?";
}

std::optional<TreeKind> tree_kind_from_string(const std::string& s) {
  if (s == "rrt") return TreeKind::rrt;
  if (s == "nnt") return TreeKind::nnt;
  if (s == "connection") return TreeKind::connection;
  return std::nullopt;
}

Tree::Tree(TreeKind kind, int dim, double epsilon, bool trace)
    : kind_(kind), dim_(dim), epsilon_(epsilon), trace_(trace) {}

Tree Tree::rrt(const Point& root, double epsilon, bool trace) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("Tree::rrt: epsilon must be > 0");
  Tree t(TreeKind::rrt, root.dim(), epsilon, trace);
  t.append(root.data(), -1, 0.0);
  return t;
}

Tree Tree::nnt(const Point& root, bool trace) {
  Tree t(TreeKind::nnt, root.dim(), 0.0, trace);
  t.append(root.data(), -1, 0.0);
  return t;
}

Tree Tree::restore(TreeKind kind, int dim, double epsilon, std::size_t base_count) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Tree::restore: dimension out of range");
  if (kind == TreeKind::rrt && !(epsilon > 0.0)) {
    throw std::invalid_argument("Tree::restore: rrt requires epsilon > 0");
  }
  if (kind == TreeKind::nnt && epsilon != 0.0) {
    throw std::invalid_argument("Tree::restore: nnt carries no epsilon");
  }
  if (kind != TreeKind::connection && base_count != 0) {
    throw std::invalid_argument("Tree::restore: base_count is connection-only");
  }
  if (kind == TreeKind::connection && base_count == 0) {
    throw std::invalid_argument("Tree::restore: connection requires base_count >= 1");
  }
  if (epsilon < 0.0) throw std::invalid_argument("Tree::restore: negative epsilon");
  Tree t(kind, dim, epsilon, false);
  t.base_count_ = base_count;
  return t;
}

bool Tree::is_base(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Tree::is_base: no such vertex");
  return kind_ == TreeKind::connection ? i < base_count_ : i == 0;
}

const double* Tree::position(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Tree::position: no such vertex");
  return coords_.data() + i * static_cast<std::size_t>(dim_);
}

Point Tree::point(std::size_t i) const { return Point(position(i), dim_); }

std::int64_t Tree::parent(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Tree::parent: no such vertex");
  return parent_[i];
}

double Tree::edge_length(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Tree::edge_length: no such vertex");
  return edge_len_[i];
}

std::int32_t Tree::depth(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Tree::depth: no such vertex");
  return depth_[i];
}

double Tree::root_path_length(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("Tree::root_path_length: no such vertex");
  double sum = 0.0;
  std::int64_t v = static_cast<std::int64_t>(i);
  while (v >= 0) {
    sum += edge_len_[static_cast<std::size_t>(v)];
    v = parent_[static_cast<std::size_t>(v)];
  }
  return sum;
}

Point Tree::traced_target(std::size_t i) const {
  if (!trace_) throw std::logic_error("Tree::traced_target: tree was grown without trace");
  if (i == 0 || i >= size()) throw std::out_of_range("Tree::traced_target: no draw for vertex");
  return Point(targets_.data() + i * static_cast<std::size_t>(dim_), dim_);
}

std::size_t Tree::append(const double* pos, std::int64_t parent, double edge_len) {
  const auto idx = static_cast<std::int64_t>(size());
  if (idx == 0) {
    if (parent != -1) throw std::invalid_argument("Tree::append: root must have parent -1");
  } else if (parent < 0 || parent >= idx) {
    throw std::invalid_argument("Tree::append: parent must precede the new vertex");
  }
  if (edge_len < 0.0) throw std::invalid_argument("Tree::append: negative edge length");
  coords_.insert(coords_.end(), pos, pos + dim_);
  parent_.push_back(parent);
  edge_len_.push_back(edge_len);
  const std::int32_t d = parent < 0 ? 0 : depth_[static_cast<std::size_t>(parent)] + 1;
  depth_.push_back(d);
  if (d > height_) height_ = d;
  if (trace_ && idx == 0) targets_.insert(targets_.end(), dim_, 0.0);  // root slot
  return static_cast<std::size_t>(idx);
}

void Tree::reserve(std::size_t n) {
  coords_.reserve(n * static_cast<std::size_t>(dim_));
  parent_.reserve(n);
  edge_len_.reserve(n);
  depth_.reserve(n);
  if (trace_) targets_.reserve(n * static_cast<std::size_t>(dim_));
}

NnIndex make_index(const Tree& t) {
  NnIndex idx(t.dim(), t.epsilon());
  idx.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) idx.insert(t.point(i));
  return idx;
}

namespace {

void check_step_args(const Tree& t, const NnIndex& idx, const Point& draw) {
  if (idx.size() != t.size()) {
    throw std::invalid_argument("step: index is out of sync with the tree");
  }
  if (draw.dim() != t.dim()) throw std::invalid_argument("step: draw dimension mismatch");
}

}  // namespace

StepOutcome rrt_step_at(Tree& t, NnIndex& idx, const Point& target) {
  if (t.kind() != TreeKind::rrt) throw std::logic_error("rrt_step: not an rrt tree");
  check_step_args(t, idx, target);
  const NnIndex::Hit hit = idx.nearest(target);

  StepOutcome out;
  out.parent = hit.index;
  out.target = target;
  if (hit.dist <= t.epsilon()) {
    // within reach: adopt the draw verbatim
    out.reached_target = true;
    out.new_vertex = t.append(target.data(), static_cast<std::int64_t>(hit.index), hit.dist);
  } else {
    const Point next = steer(t.point(hit.index), target, hit.dist, t.epsilon());
    // store the realized length (equals epsilon up to roundoff)
    const double edge = distance(t.point(hit.index), next);
    out.reached_target = false;
    out.new_vertex = t.append(next.data(), static_cast<std::int64_t>(hit.index), edge);
  }
  if (t.trace()) {
    t.targets_.insert(t.targets_.end(), target.data(), target.data() + t.dim());
  }
  idx.insert(t.point(out.new_vertex));
  return out;
}

StepOutcome rrt_step(Tree& t, NnIndex& idx, RngStream& rng) {
  return rrt_step_at(t, idx, uniform_sample(t.dim(), rng));
}

StepOutcome nnt_step_at(Tree& t, NnIndex& idx, const Point& draw) {
  if (t.kind() == TreeKind::rrt) throw std::logic_error("nnt_step: not an nnt/connection tree");
  check_step_args(t, idx, draw);
  const NnIndex::Hit hit = idx.nearest(draw);

  StepOutcome out;
  out.parent = hit.index;
  out.target = draw;
  out.reached_target = true;  // the draw always becomes the vertex
  out.new_vertex = t.append(draw.data(), static_cast<std::int64_t>(hit.index), hit.dist);
  if (t.trace()) {
    t.targets_.insert(t.targets_.end(), draw.data(), draw.data() + t.dim());
  }
  idx.insert(t.point(out.new_vertex));
  return out;
}

StepOutcome nnt_step(Tree& t, NnIndex& idx, RngStream& rng) {
  return nnt_step_at(t, idx, uniform_sample(t.dim(), rng));
}

Tree grow_connection(const Tree& base, std::size_t n_extra, RngStream& rng) {
  if (base.size() == 0) throw std::invalid_argument("grow_connection: empty base tree");
  Tree t(TreeKind::connection, base.dim(), base.epsilon(), false);
  t.reserve(base.size() + n_extra);
  for (std::size_t i = 0; i < base.size(); ++i) {
    t.append(base.position(i), base.parent(i), base.edge_length(i));
  }
  t.base_count_ = base.size();
  NnIndex idx = make_index(t);
  for (std::size_t k = 0; k < n_extra; ++k) nnt_step(t, idx, rng);
  return t;
}

GrowResult grow_until(Tree& t, NnIndex& idx, RngStream& rng,
                      const std::function<bool(const Tree&, const StepOutcome&)>& stop,
                      std::size_t max_steps) {
  GrowResult res;
  for (std::size_t s = 0; s < max_steps; ++s) {
    const StepOutcome out =
        t.kind() == TreeKind::rrt ? rrt_step(t, idx, rng) : nnt_step(t, idx, rng);
    ++res.steps;
    if (stop(t, out)) {
      res.stopped = true;
      return res;
    }
  }
  return res;
}

}  // namespace rrtsim

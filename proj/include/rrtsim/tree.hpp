#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrtsim/nn_index.hpp"
#include "rrtsim/point.hpp"
#include "rrtsim/rng.hpp"

namespace rrtsim {

enum class TreeKind { rrt, nnt, connection };

std::string to_string(TreeKind k);
std::optional<TreeKind> tree_kind_from_string(const std::string& s);

/// Result of one growth step.
struct StepOutcome {
  std::size_t new_vertex = 0;  // index of the vertex added by this step
  std::size_t parent = 0;      // index it attached to
  Point target;                // the uniform draw that drove the step
  bool reached_target = false; // the draw was adopted verbatim as the vertex
};

/// A rooted growth tree over [0,1]^d stored as flat parallel arrays
/// (positions, parent links, edge lengths, depths), so million-vertex runs
/// stay cache-friendly.  Vertex i was inserted at step i; the root is vertex
/// 0 with parent -1 and edge length 0.
///
/// Three kinds share the storage:
///  - rrt: each step draws a uniform target; if the nearest vertex is within
///    epsilon the draw is adopted verbatim, otherwise the tree steps exactly
///    epsilon from that vertex toward the draw.
///  - nnt: each uniform draw attaches directly to its nearest vertex.
///  - connection: an nnt grown on top of a copied base tree; base vertices
///    keep indices 0..base_count()-1 and grown vertex n lands at index
///    base_count()-1+n.
class Tree {
 public:
  static Tree rrt(const Point& root, double epsilon, bool trace = false);
  static Tree nnt(const Point& root, bool trace = false);

  /// Empty shell for deserialization: vertices are appended afterwards.
  static Tree restore(TreeKind kind, int dim, double epsilon, std::size_t base_count);

  [[nodiscard]] TreeKind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return dim_; }
  /// Step length for rrt/connection trees; 0 for pure nnt trees.
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] std::size_t size() const { return parent_.size(); }
  /// Number of base vertices (connection trees; equals size() pre-growth).
  [[nodiscard]] std::size_t base_count() const { return base_count_; }
  [[nodiscard]] bool is_base(std::size_t i) const;
  [[nodiscard]] bool trace() const { return trace_; }

  [[nodiscard]] const double* position(std::size_t i) const;
  [[nodiscard]] Point point(std::size_t i) const;
  [[nodiscard]] std::int64_t parent(std::size_t i) const;
  [[nodiscard]] double edge_length(std::size_t i) const;
  [[nodiscard]] std::int32_t depth(std::size_t i) const;
  [[nodiscard]] std::int32_t height() const { return height_; }

  /// Total edge length of the path from vertex i up to the root.  O(depth).
  [[nodiscard]] double root_path_length(std::size_t i) const;

  /// The uniform draw behind step i (trace mode only, i >= 1).
  [[nodiscard]] Point traced_target(std::size_t i) const;

  /// Appends a vertex (used by the step functions and the loader); validates
  /// the parent link and maintains depth/height bookkeeping.
  std::size_t append(const double* pos, std::int64_t parent, double edge_len);

  void reserve(std::size_t n);

 private:
  friend Tree grow_connection(const Tree& base, std::size_t n_extra, RngStream& rng);
  friend StepOutcome rrt_step_at(Tree& t, NnIndex& idx, const Point& target);
  friend StepOutcome nnt_step_at(Tree& t, NnIndex& idx, const Point& draw);

  Tree(TreeKind kind, int dim, double epsilon, bool trace);

  TreeKind kind_;
  int dim_;
  double epsilon_;
  bool trace_;
  std::size_t base_count_ = 0;
  std::int32_t height_ = 0;
  std::vector<double> coords_;        // size * dim
  std::vector<std::int64_t> parent_;  // -1 for the root
  std::vector<double> edge_len_;
  std::vector<std::int32_t> depth_;
  std::vector<double> targets_;       // trace mode: draw behind step i (slot 0 zeroed)
};

/// Builds an NN index over every current vertex of t (cell hint = epsilon).
NnIndex make_index(const Tree& t);

/// One RRT step: draw a uniform target and either adopt it (nearest vertex
/// within epsilon) or steer epsilon toward it.  Consumes exactly dim doubles.
StepOutcome rrt_step(Tree& t, NnIndex& idx, RngStream& rng);
/// Deterministic core of rrt_step with an injected target (tests, replays).
StepOutcome rrt_step_at(Tree& t, NnIndex& idx, const Point& target);

/// One NNT step: draw a uniform point and attach it to its nearest vertex.
/// Also the growth step for connection trees.  Consumes exactly dim doubles.
StepOutcome nnt_step(Tree& t, NnIndex& idx, RngStream& rng);
StepOutcome nnt_step_at(Tree& t, NnIndex& idx, const Point& draw);

/// Copies `base` and grows n_extra NNT vertices on top of it.  With the same
/// draw stream, a bare NNT rooted at base's root vertex couples pathwise:
/// grown edge lengths never exceed the bare NNT's, and grown depths obey
/// depth(base_count-1+n) <= nnt_depth(n) + base.height() + 1.
Tree grow_connection(const Tree& base, std::size_t n_extra, RngStream& rng);

struct GrowResult {
  std::size_t steps = 0;  // steps actually taken
  bool stopped = false;   // stop predicate fired (false = max_steps exhausted)
};

/// Runs kind-appropriate steps until stop(tree, outcome) returns true or
/// max_steps steps have been taken.  The predicate is checked after every
/// step.
GrowResult grow_until(Tree& t, NnIndex& idx, RngStream& rng,
                      const std::function<bool(const Tree&, const StepOutcome&)>& stop,
                      std::size_t max_steps);

}  // namespace rrtsim

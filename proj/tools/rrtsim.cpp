// Command-line front end: seeded experiment runners with CSV/JSON output,
// single-tree growth with dump/series emission, and self-check assertions.
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rrtsim/cover.hpp"
#include "rrtsim/experiments.hpp"
#include "rrtsim/metrics.hpp"
#include "rrtsim/nn_index.hpp"
#include "rrtsim/point.hpp"
#include "rrtsim/rng.hpp"
#include "rrtsim/serialize.hpp"
#include "rrtsim/stats.hpp"
#include "rrtsim/tree.hpp"

namespace {

using namespace rrtsim;

/// Bad flags, bad values, missing fields: printed with the field name, exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage_fail(const std::string& msg) { throw UsageError(msg); }

void print_usage(std::FILE* to) {
  std::fprintf(to, R"(usage: rrtsim <subcommand> [--flag value ...]

subcommands
  hit-time    steps until an RRT vertex enters x0 >= threshold, per epsilon
              flags: --d --epsilons a,b,... --trials --seed --max-steps
                     --threshold (default 0.5)
  cover-time  steps until the epsilon-cover occupancy grid is full, per epsilon
              flags: --d --epsilons a,b,... --trials --seed --max-steps
  post-cover  edge-length / path-length / depth / height statistics of an RRT
              at growth checkpoints
              flags: --d --epsilon --n --checkpoints a,b,... --trials --seed
  nnt-stats   depth and height of NNTs at size n, with the index-walk depth
              oracle; --epsilon > 0 adds an RRT comparison arm
              flags: --d --epsilon --n --trials --seed
  coupon      coupon-collector draws over n equal classes
              flags: --n --trials --seed
  grow        grow one tree; dump it and/or its per-step series to files
              flags: --kind rrt|nnt --d --epsilon --steps --seed --stream
                     --dump path --series path
  check       growth-rule, occupancy-transfer and connection-coupling
              self-checks on seeded runs
              flags: --d --epsilon --steps --seed

common flags
  --config path.json   key/value file, same keys as flags; flags override
  --parallelism K      worker threads for trials (default 1; output invariant)
  --format csv|json    aggregate output format (default csv)
  --out path           write aggregates to a file (default: stdout)
  --raw path           also write per-trial values as CSV
  --censor-limit F     exit 1 if the censored fraction exceeds F (default 0.01)
  --max-steps N        per-trial step cap (default 1000000)

exit codes: 0 ok, 1 runtime/censoring failure, 2 usage error
)");
}

// ---- value parsing ---------------------------------------------------------

std::int64_t parse_i64(const std::string& field, const std::string& s) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == s.c_str() || *end != '\0') {
    usage_fail(field + ": not an integer: '" + s + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::uint64_t parse_u64(const std::string& field, const std::string& s) {
  char* end = nullptr;
  errno = 0;
  if (!s.empty() && s[0] == '-') usage_fail(field + ": must be non-negative: '" + s + "'");
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end == s.c_str() || *end != '\0') {
    usage_fail(field + ": not an unsigned integer: '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double parse_f64(const std::string& field, const std::string& s) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end == s.c_str() || *end != '\0') {
    usage_fail(field + ": not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) parts.push_back(cur);
  return parts;
}

std::vector<double> parse_f64_list(const std::string& field, const std::string& s) {
  std::vector<double> out;
  for (const std::string& p : split_commas(s)) out.push_back(parse_f64(field, p));
  if (out.empty()) usage_fail(field + ": empty list");
  return out;
}

std::vector<std::int64_t> parse_i64_list(const std::string& field, const std::string& s) {
  std::vector<std::int64_t> out;
  for (const std::string& p : split_commas(s)) out.push_back(parse_i64(field, p));
  if (out.empty()) usage_fail(field + ": empty list");
  return out;
}

// ---- options ---------------------------------------------------------------

struct Options {
  std::string sub;
  int d = 2;
  std::vector<double> epsilons;
  bool have_epsilons = false;
  double epsilon = 0.0;
  bool have_epsilon = false;
  std::int64_t n = 0;
  bool have_n = false;
  std::int64_t steps = 0;
  bool have_steps = false;
  std::int64_t max_steps = 1000000;
  std::int64_t trials = 0;
  bool have_trials = false;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double threshold = 0.5;
  std::vector<std::int64_t> checkpoints;
  int parallelism = 1;
  double censor_limit = 0.01;
  std::string format = "csv";
  std::string out_path;
  std::string raw_path;
  std::string dump_path;
  std::string series_path;
  std::string kind;
};

const std::set<std::string>& allowed_keys(const std::string& sub) {
  static const std::map<std::string, std::set<std::string>> table = {
      {"hit-time",
       {"d", "epsilons", "trials", "seed", "max-steps", "threshold", "parallelism", "format",
        "out", "raw", "censor-limit"}},
      {"cover-time",
       {"d", "epsilons", "trials", "seed", "max-steps", "parallelism", "format", "out", "raw",
        "censor-limit"}},
      {"post-cover",
       {"d", "epsilon", "n", "checkpoints", "trials", "seed", "parallelism", "format", "out",
        "raw", "censor-limit"}},
      {"nnt-stats",
       {"d", "epsilon", "n", "trials", "seed", "parallelism", "format", "out", "raw",
        "censor-limit"}},
      {"coupon",
       {"n", "trials", "seed", "parallelism", "format", "out", "raw", "censor-limit"}},
      {"grow", {"kind", "d", "epsilon", "steps", "seed", "stream", "dump", "series"}},
      {"check", {"d", "epsilon", "steps", "seed"}},
  };
  const auto it = table.find(sub);
  if (it == table.end()) usage_fail("unknown subcommand: '" + sub + "'");
  return it->second;
}

void apply_kv(Options& o, const std::string& key, const std::string& value) {
  if (!allowed_keys(o.sub).count(key)) {
    usage_fail(key + ": unknown key for subcommand '" + o.sub + "'");
  }
  if (key == "d") {
    o.d = static_cast<int>(parse_i64(key, value));
    if (o.d < 1 || o.d > kMaxDim) usage_fail("d: must be in [1, 16], got " + value);
  } else if (key == "epsilons") {
    o.epsilons = parse_f64_list(key, value);
    o.have_epsilons = true;
    for (double e : o.epsilons) {
      if (!(e > 0.0)) usage_fail("epsilons: entries must be positive, got " + value);
    }
  } else if (key == "epsilon") {
    o.epsilon = parse_f64(key, value);
    o.have_epsilon = true;
    if (o.epsilon < 0.0) usage_fail("epsilon: must be >= 0, got " + value);
  } else if (key == "n") {
    o.n = parse_i64(key, value);
    o.have_n = true;
    if (o.n < 1) usage_fail("n: must be >= 1, got " + value);
  } else if (key == "steps") {
    o.steps = parse_i64(key, value);
    o.have_steps = true;
    if (o.steps < 1) usage_fail("steps: must be >= 1, got " + value);
  } else if (key == "max-steps") {
    o.max_steps = parse_i64(key, value);
    if (o.max_steps < 1) usage_fail("max-steps: must be >= 1, got " + value);
  } else if (key == "trials") {
    o.trials = parse_i64(key, value);
    o.have_trials = true;
    if (o.trials < 1) usage_fail("trials: must be >= 1, got " + value);
  } else if (key == "seed") {
    o.seed = parse_u64(key, value);
  } else if (key == "stream") {
    o.stream = parse_u64(key, value);
  } else if (key == "threshold") {
    o.threshold = parse_f64(key, value);
    if (!(o.threshold > 0.0 && o.threshold <= 1.0)) {
      usage_fail("threshold: must be in (0, 1], got " + value);
    }
  } else if (key == "checkpoints") {
    o.checkpoints = parse_i64_list(key, value);
  } else if (key == "parallelism") {
    o.parallelism = static_cast<int>(parse_i64(key, value));
    if (o.parallelism < 1) usage_fail("parallelism: must be >= 1, got " + value);
  } else if (key == "censor-limit") {
    o.censor_limit = parse_f64(key, value);
    if (o.censor_limit < 0.0 || o.censor_limit > 1.0) {
      usage_fail("censor-limit: must be in [0, 1], got " + value);
    }
  } else if (key == "format") {
    if (value != "csv" && value != "json") usage_fail("format: must be csv or json, got " + value);
    o.format = value;
  } else if (key == "out") {
    o.out_path = value;
  } else if (key == "raw") {
    o.raw_path = value;
  } else if (key == "dump") {
    o.dump_path = value;
  } else if (key == "series") {
    o.series_path = value;
  } else if (key == "kind") {
    if (value != "rrt" && value != "nnt") usage_fail("kind: must be rrt or nnt, got " + value);
    o.kind = value;
  } else {
    usage_fail(key + ": unhandled key");  // unreachable; allowed_keys gates entry
  }
}

std::string json_value_to_string(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!item.is_number()) usage_fail(key + ": config arrays must hold numbers");
      if (!joined.empty()) joined += ',';
      joined += item.dump();
    }
    return joined;
  }
  usage_fail(key + ": unsupported config value type");
}

void apply_config_file(Options& o, const std::string& path) {
  std::ifstream is(path);
  if (!is) usage_fail("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    usage_fail("config: parse error in '" + path + "': " + e.what());
  }
  if (!j.is_object()) usage_fail("config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    apply_kv(o, key, json_value_to_string(key, value));
  }
}

Options parse_args(int argc, char** argv) {
  if (argc < 2) usage_fail("missing subcommand");
  const std::string sub = argv[1];
  if (sub == "--help" || sub == "-h" || sub == "help") {
    print_usage(stdout);
    std::exit(0);
  }
  Options o;
  o.sub = sub;
  allowed_keys(sub);  // validates the subcommand name

  // collect --key value / --key=value pairs in order
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string config_path;
  for (int i = 2; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--help" || arg == "-h") {
      print_usage(stdout);
      std::exit(0);
    }
    if (arg.rfind("--", 0) != 0 || arg.size() <= 2) {
      usage_fail("expected --flag, got '" + arg + "'");
    }
    std::string key = arg.substr(2);
    std::string value;
    const std::size_t eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= argc) usage_fail(key + ": missing value");
      value = argv[++i];
    }
    if (key == "config") {
      config_path = value;
    } else {
      pairs.emplace_back(std::move(key), std::move(value));
    }
  }
  if (!config_path.empty()) apply_config_file(o, config_path);
  for (const auto& [key, value] : pairs) apply_kv(o, key, value);
  return o;
}

// ---- experiment subcommands -------------------------------------------------

ExperimentPlan plan_from(const Options& o) {
  ExperimentPlan plan;
  plan.d = o.d;
  plan.epsilons = o.epsilons;
  plan.epsilon = o.epsilon;
  plan.n = o.n;
  plan.max_steps = o.max_steps;
  plan.trials = o.trials;
  plan.seed = o.seed;
  plan.threshold = o.threshold;
  plan.checkpoints = o.checkpoints;
  plan.parallelism = o.parallelism;
  return plan;
}

int run_experiment(const Options& o, PlanKind kind) {
  if (!o.have_trials) usage_fail("trials: required");
  if (kind == PlanKind::hit_time || kind == PlanKind::cover_time) {
    if (!o.have_epsilons) usage_fail("epsilons: required");
  }
  if (kind == PlanKind::post_cover && !o.have_epsilon) usage_fail("epsilon: required");
  if (kind == PlanKind::post_cover || kind == PlanKind::nnt_stats || kind == PlanKind::coupon) {
    if (!o.have_n) usage_fail("n: required");
  }
  ExperimentPlan plan = plan_from(o);
  plan.kind = kind;

  const RunResult result = run_plan(plan, /*keep_raw=*/!o.raw_path.empty());
  const std::string content =
      o.format == "json" ? rows_to_json(result.rows, plan) : rows_to_csv(result.rows);
  if (o.out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
  } else {
    write_file_atomic(o.out_path, content);
    std::printf("wrote %s (%zu rows, %lld trials, %lld censored)\n", o.out_path.c_str(),
                result.rows.size(), static_cast<long long>(result.trials),
                static_cast<long long>(result.censored));
  }
  if (!o.raw_path.empty()) {
    write_file_atomic(o.raw_path, raw_to_csv(result.raw));
    std::printf("wrote %s (%zu raw lines)\n", o.raw_path.c_str(), result.raw.size());
  }
  if (result.censored_fraction() > o.censor_limit) {
    std::fprintf(stderr, "censored fraction %.4f exceeds limit %.4f\n",
                 result.censored_fraction(), o.censor_limit);
    return 1;
  }
  return 0;
}

// ---- grow -------------------------------------------------------------------

std::string series_to_csv(const std::vector<SeriesSample>& rows) {
  std::string out = "n,delta,delta_scaled,cum_length,root_path,depth,height\n";
  for (const SeriesSample& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.delta);
    out += ',';
    out += format_double(r.delta_scaled);
    out += ',';
    out += format_double(r.cum_length);
    out += ',';
    if (!std::isnan(r.root_path)) out += format_double(r.root_path);
    out += ',';
    out += std::to_string(r.depth);
    out += ',';
    out += std::to_string(r.height);
    out += '\n';
  }
  return out;
}

int run_grow(const Options& o) {
  if (o.kind.empty()) usage_fail("kind: required (rrt or nnt)");
  if (!o.have_steps) usage_fail("steps: required");
  const bool is_rrt = o.kind == "rrt";
  if (is_rrt && !(o.epsilon > 0.0)) usage_fail("epsilon: required and positive for kind rrt");
  if (!is_rrt && o.have_epsilon && o.epsilon != 0.0) {
    usage_fail("epsilon: must be omitted (or 0) for kind nnt");
  }

  RngStream rng(o.seed, o.stream);
  Tree t = is_rrt ? Tree::rrt(Point(o.d), o.epsilon) : Tree::nnt(uniform_sample(o.d, rng));
  t.reserve(static_cast<std::size_t>(o.steps) + 1);
  NnIndex idx = make_index(t);
  SeriesRecorder recorder(/*keep_rows=*/!o.series_path.empty());
  for (std::int64_t step = 1; step <= o.steps; ++step) {
    const StepOutcome out = is_rrt ? rrt_step(t, idx, rng) : nnt_step(t, idx, rng);
    recorder.record_step(t, out);
  }

  if (!o.dump_path.empty()) {
    DumpMeta meta;
    meta.seed = o.seed;
    meta.stream = o.stream;
    write_file_atomic(o.dump_path, dump_tree_string(t, meta));
    std::printf("wrote %s (%zu vertices)\n", o.dump_path.c_str(), t.size());
  }
  if (!o.series_path.empty()) {
    write_file_atomic(o.series_path, series_to_csv(recorder.rows()));
    std::printf("wrote %s (%zu rows)\n", o.series_path.c_str(), recorder.rows().size());
  }
  const std::string eps_part = is_rrt ? " epsilon=" + format_double(o.epsilon) : std::string();
  std::printf("grew %s d=%d%s steps=%lld: size=%zu height=%d total_length=%s\n", o.kind.c_str(),
              o.d, eps_part.c_str(), static_cast<long long>(o.steps), t.size(), t.height(),
              format_double(recorder.cum_length()).c_str());
  return 0;
}

// ---- check ------------------------------------------------------------------

int run_check(const Options& o) {
  if (!o.have_epsilon || !(o.epsilon > 0.0)) usage_fail("epsilon: required and positive");
  if (!o.have_steps) usage_fail("steps: required");

  // growth-rule and occupancy-transfer checks over one seeded RRT run
  std::int64_t rule_bad = 0;
  std::int64_t transfer_bad = 0;
  {
    RngStream rng(o.seed, 0);
    Tree t = Tree::rrt(Point(o.d), o.epsilon);
    t.reserve(static_cast<std::size_t>(o.steps) + 1);
    NnIndex idx = make_index(t);
    CoverState cs(o.d, o.epsilon);
    cs.register_vertex(t.point(0), 0);
    for (std::int64_t step = 1; step <= o.steps; ++step) {
      const StepOutcome out = rrt_step(t, idx, rng);
      const Point np = t.point(out.new_vertex);
      if (t.edge_length(out.new_vertex) > o.epsilon + 1e-12) ++rule_bad;
      if (out.reached_target) {
        if (!(np == out.target)) ++rule_bad;
      } else {
        if (!(distance(t.point(out.parent), out.target) > o.epsilon)) ++rule_bad;
      }
      if (!occupancy_transfer_check(cs, out, np)) ++transfer_bad;
      cs.register_vertex(np, step);
    }
  }
  std::printf("growth-rule: %s (%lld steps, %lld violations)\n", rule_bad == 0 ? "ok" : "FAIL",
              static_cast<long long>(o.steps), static_cast<long long>(rule_bad));
  std::printf("occupancy-transfer: %s (%lld steps, %lld violations)\n",
              transfer_bad == 0 ? "ok" : "FAIL", static_cast<long long>(o.steps),
              static_cast<long long>(transfer_bad));

  // connection coupling: grow a base RRT to full grid occupancy, then grow an
  // NNT on top of it and a bare NNT from its root on identical draws
  std::int64_t coupling_bad = 0;
  std::size_t base_size = 0;
  std::int64_t n_extra = std::min<std::int64_t>(o.steps, 20000);
  {
    RngStream base_rng(o.seed, 1);
    Tree base = Tree::rrt(Point(o.d), o.epsilon);
    NnIndex bidx = make_index(base);
    CoverState bcs(o.d, o.epsilon);
    bcs.register_vertex(base.point(0), 0);
    std::int64_t taken = 0;
    while (!bcs.covered() && taken < 1000000) {
      const StepOutcome out = rrt_step(base, bidx, base_rng);
      ++taken;
      bcs.register_vertex(base.point(out.new_vertex), taken);
    }
    base_size = base.size();

    RngStream grow_a(o.seed, 2);
    RngStream grow_b(o.seed, 2);
    const Tree conn = grow_connection(base, static_cast<std::size_t>(n_extra), grow_a);
    Tree bare = Tree::nnt(base.point(0));
    bare.reserve(static_cast<std::size_t>(n_extra) + 1);
    NnIndex nidx = make_index(bare);
    const std::int32_t slack = base.height() + 1;
    for (std::int64_t k = 1; k <= n_extra; ++k) {
      nnt_step(bare, nidx, grow_b);
      const std::size_t gi = base.size() - 1 + static_cast<std::size_t>(k);
      const std::size_t bi = static_cast<std::size_t>(k);
      if (conn.edge_length(gi) > bare.edge_length(bi)) ++coupling_bad;
      if (conn.depth(gi) > bare.depth(bi) + slack) ++coupling_bad;
    }
  }
  std::printf("coupling: %s (base %zu vertices, %lld grown, %lld violations)\n",
              coupling_bad == 0 ? "ok" : "FAIL", base_size, static_cast<long long>(n_extra),
              static_cast<long long>(coupling_bad));

  if (rule_bad + transfer_bad + coupling_bad != 0) {
    std::fprintf(stderr, "check failed\n");
    return 1;
  }
  return 0;
}

int run_main(int argc, char** argv) {
  const Options o = parse_args(argc, argv);
  if (o.sub == "hit-time") return run_experiment(o, PlanKind::hit_time);
  if (o.sub == "cover-time") return run_experiment(o, PlanKind::cover_time);
  if (o.sub == "post-cover") return run_experiment(o, PlanKind::post_cover);
  if (o.sub == "nnt-stats") return run_experiment(o, PlanKind::nnt_stats);
  if (o.sub == "coupon") return run_experiment(o, PlanKind::coupon);
  if (o.sub == "grow") return run_grow(o);
  if (o.sub == "check") return run_check(o);
  usage_fail("unknown subcommand: '" + o.sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    std::fprintf(stderr, "run 'rrtsim --help' for usage\n");
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

#include "rrtsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "rrtsim/cover.hpp"
#include "rrtsim/metrics.hpp"
#include "rrtsim/nn_index.hpp"
#include "rrtsim/point.hpp"
#include "rrtsim/rng.hpp"
#include "rrtsim/serialize.hpp"
#include "rrtsim/tree.hpp"

namespace rrtsim {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_common(const ExperimentPlan& plan, PlanKind expected) {
  require(plan.kind == expected, "plan kind does not match the runner");
  require(plan.d >= 1 && plan.d <= kMaxDim, "plan: d out of range");
  require(plan.trials >= 1, "plan: trials must be >= 1");
  require(plan.parallelism >= 1, "plan: parallelism must be >= 1");
}

/// Canonical configuration string behind stream derivation.  Deliberately
/// excludes seed, trials, max_steps and parallelism: raising the cap or adding
/// replicas/threads never changes existing trajectories.
std::string canonical_config(const ExperimentPlan& plan, double eps) {
  std::ostringstream os;
  os << to_string(plan.kind) << "|d=" << plan.d << "|eps=" << format_double(eps)
     << "|n=" << plan.n << "|thr=" << format_double(plan.threshold);
  return os.str();
}

std::uint64_t config_hash(const ExperimentPlan& plan, double eps, const char* suffix) {
  std::string cfg = canonical_config(plan, eps);
  if (suffix != nullptr && *suffix != '\0') {
    cfg += '|';
    cfg += suffix;
  }
  return fnv1a64(cfg.c_str());
}

AggregateRow const_row(std::string kind, int d, double eps, std::int64_t n_or_step, double value) {
  AggregateRow r;
  r.kind = std::move(kind);
  r.d = d;
  r.epsilon = eps;
  r.n_or_step = n_or_step;
  r.trials = 0;
  r.mean = value;
  r.ci95 = 0.0;
  r.censored = 0;
  return r;
}

/// Splits slot values into kept/censored, summarizes the kept ones and emits
/// one aggregate row.  Returns the summary (count 0 when everything censored).
Summary aggregate_row(RunResult& out, std::string kind, const ExperimentPlan& plan, double eps,
                      std::int64_t n_or_step, const std::vector<double>& values,
                      const std::vector<std::uint8_t>* censored) {
  std::vector<double> kept;
  kept.reserve(values.size());
  std::int64_t ncens = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (censored != nullptr && (*censored)[i] != 0) {
      ++ncens;
    } else {
      kept.push_back(values[i]);
    }
  }
  Summary s{};
  if (!kept.empty()) s = summarize(kept);
  AggregateRow r;
  r.kind = std::move(kind);
  r.d = plan.d;
  r.epsilon = eps;
  r.n_or_step = n_or_step;
  r.trials = static_cast<std::int64_t>(values.size());
  r.mean = s.mean;
  r.ci95 = s.ci95;
  r.censored = ncens;
  out.rows.push_back(std::move(r));
  return s;
}

void push_raw(std::vector<std::string>& raw, const std::string& stat, double eps,
              std::int64_t n_or_step, std::int64_t trial, double value) {
  std::string line = stat;
  line += ',';
  line += format_double(eps);
  line += ',';
  line += std::to_string(n_or_step);
  line += ',';
  line += std::to_string(trial);
  line += ',';
  line += format_double(value);
  raw.push_back(std::move(line));
}

bool fit_domain_ok(const std::vector<double>& xs) {
  if (xs.size() < 2) return false;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *lo < *hi;
}

}  // namespace

std::string to_string(PlanKind k) {
  switch (k) {
    case PlanKind::hit_time: return "hit_time";
    case PlanKind::cover_time: return "cover_time";
    case PlanKind::post_cover: return "post_cover";
    case PlanKind::nnt_stats: return "nnt_stats";
    case PlanKind::coupon: return "coupon";
  }
  return "unknown";
}

std::optional<PlanKind> plan_kind_from_string(const std::string& s) {
  if (s == "hit_time") return PlanKind::hit_time;
  if (s == "cover_time") return PlanKind::cover_time;
  if (s == "post_cover") return PlanKind::post_cover;
  if (s == "nnt_stats") return PlanKind::nnt_stats;
  if (s == "coupon") return PlanKind::coupon;
  return std::nullopt;
}

std::uint64_t stream_base(const ExperimentPlan& plan, double epsilon_or_zero) {
  return config_hash(plan, epsilon_or_zero, "");
}

void parallel_for_trials(std::int64_t trials, int parallelism,
                         const std::function<void(std::int64_t)>& body) {
  require(trials >= 0, "parallel_for_trials: trials must be >= 0");
  require(parallelism >= 1, "parallel_for_trials: parallelism must be >= 1");
  if (trials == 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(parallelism, trials));
  if (workers == 1) {
    for (std::int64_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&]() {
    for (;;) {
      const std::int64_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= trials) return;
      {
        std::lock_guard<std::mutex> lock(err_mu);
        if (err) return;
      }
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

RunResult run_hit_time(const ExperimentPlan& plan, bool keep_raw) {
  require_common(plan, PlanKind::hit_time);
  require(!plan.epsilons.empty(), "hit_time: epsilons must be non-empty");
  for (double e : plan.epsilons) require(e > 0.0, "hit_time: epsilons must be positive");
  require(plan.max_steps >= 1, "hit_time: max_steps must be >= 1");
  require(plan.threshold > 0.0 && plan.threshold <= 1.0, "hit_time: threshold must be in (0,1]");

  RunResult out;
  std::vector<double> inv_eps;
  std::vector<double> means;
  for (double eps : plan.epsilons) {
    const std::uint64_t base = stream_base(plan, eps);
    std::vector<double> value(static_cast<std::size_t>(plan.trials), 0.0);
    std::vector<std::uint8_t> cens(static_cast<std::size_t>(plan.trials), 0);
    parallel_for_trials(plan.trials, plan.parallelism, [&](std::int64_t tr) {
      RngStream rng(plan.seed, base ^ static_cast<std::uint64_t>(tr));
      Tree t = Tree::rrt(Point(plan.d), eps);
      NnIndex idx = make_index(t);
      auto stop = [&](const Tree& tree, const StepOutcome& o) {
        return in_half_space(tree.point(o.new_vertex), 0, plan.threshold);
      };
      const GrowResult res =
          grow_until(t, idx, rng, stop, static_cast<std::size_t>(plan.max_steps));
      value[static_cast<std::size_t>(tr)] = static_cast<double>(res.steps);
      cens[static_cast<std::size_t>(tr)] = res.stopped ? 0 : 1;
    });
    const Summary s = aggregate_row(out, "hit_time", plan, eps, 0, value, &cens);
    for (std::int64_t tr = 0; keep_raw && tr < plan.trials; ++tr) {
      const auto i = static_cast<std::size_t>(tr);
      push_raw(out.raw, cens[i] ? "hit_time_censored" : "hit_time", eps, 0, tr, value[i]);
    }
    out.trials += plan.trials;
    out.censored += out.rows.back().censored;
    if (s.count > 0) {
      inv_eps.push_back(1.0 / eps);
      means.push_back(s.mean);
    }
  }
  if (inv_eps.size() >= 3 && fit_domain_ok(inv_eps)) {
    out.fit = fit_loglog(inv_eps, means);
    out.rows.push_back(const_row("hit_time/fit_exponent", plan.d, 0.0, 0, out.fit->slope));
    out.rows.back().trials = static_cast<std::int64_t>(inv_eps.size());
    out.rows.back().ci95 = 1.96 * out.fit->stderr_slope;
    out.rows.push_back(const_row("hit_time/fit_r2", plan.d, 0.0, 0, out.fit->r_squared));
    out.rows.back().trials = static_cast<std::int64_t>(inv_eps.size());
  }
  return out;
}

RunResult run_cover_time(const ExperimentPlan& plan, bool keep_raw) {
  require_common(plan, PlanKind::cover_time);
  require(!plan.epsilons.empty(), "cover_time: epsilons must be non-empty");
  for (double e : plan.epsilons) require(e > 0.0, "cover_time: epsilons must be positive");
  require(plan.max_steps >= 1, "cover_time: max_steps must be >= 1");
  for (double e : plan.epsilons) (void)CoverState(plan.d, e);  // memory guard before any trials

  RunResult out;
  std::vector<double> xs;  // ln(1/eps)
  std::vector<double> ys;  // mean cover step * eps^d
  for (double eps : plan.epsilons) {
    const double alpha_grid = static_cast<double>(CoverState(plan.d, eps).cell_count());
    const std::uint64_t base = stream_base(plan, eps);
    std::vector<double> value(static_cast<std::size_t>(plan.trials), 0.0);
    std::vector<std::uint8_t> cens(static_cast<std::size_t>(plan.trials), 0);
    parallel_for_trials(plan.trials, plan.parallelism, [&](std::int64_t tr) {
      RngStream rng(plan.seed, base ^ static_cast<std::uint64_t>(tr));
      Tree t = Tree::rrt(Point(plan.d), eps);
      NnIndex idx = make_index(t);
      CoverState cs(plan.d, eps);
      cs.register_vertex(t.point(0), 0);
      std::int64_t taken = 0;
      while (!cs.covered() && taken < plan.max_steps) {
        const StepOutcome o = rrt_step(t, idx, rng);
        ++taken;
        cs.register_vertex(t.point(o.new_vertex), taken);
      }
      const auto i = static_cast<std::size_t>(tr);
      if (cs.covered()) {
        value[i] = static_cast<double>(*cs.cover_step());
      } else {
        value[i] = static_cast<double>(taken);
        cens[i] = 1;
      }
    });
    const Summary s = aggregate_row(out, "cover_time", plan, eps, 0, value, &cens);
    for (std::int64_t tr = 0; keep_raw && tr < plan.trials; ++tr) {
      const auto i = static_cast<std::size_t>(tr);
      push_raw(out.raw, cens[i] ? "cover_time_censored" : "cover_time", eps, 0, tr, value[i]);
    }
    out.trials += plan.trials;
    out.censored += out.rows.back().censored;

    const double beta = beta_const(plan.d, eps);
    const double alpha = alpha_const(plan.d, eps);
    const double lower =
        beta / std::pow(2.0, plan.d) * harmonic(static_cast<std::int64_t>(std::floor(beta)));
    const double upper = alpha * harmonic(static_cast<std::int64_t>(std::ceil(alpha)));
    const double upper_grid =
        alpha_grid * harmonic(static_cast<std::int64_t>(alpha_grid));
    out.rows.push_back(const_row("cover_time/ref_lower", plan.d, eps, 0, lower));
    out.rows.push_back(const_row("cover_time/ref_upper", plan.d, eps, 0, upper));
    out.rows.push_back(const_row("cover_time/ref_upper_grid", plan.d, eps, 0, upper_grid));
    if (s.count > 0) {
      xs.push_back(std::log(1.0 / eps));
      ys.push_back(s.mean * std::pow(eps, plan.d));
    }
  }
  if (fit_domain_ok(xs)) {
    out.fit = fit_linear(xs, ys);
    out.rows.push_back(const_row("cover_time/fit_slope", plan.d, 0.0, 0, out.fit->slope));
    out.rows.back().trials = static_cast<std::int64_t>(xs.size());
    out.rows.back().ci95 = 1.96 * out.fit->stderr_slope;
    out.rows.push_back(const_row("cover_time/fit_r2", plan.d, 0.0, 0, out.fit->r_squared));
    out.rows.back().trials = static_cast<std::int64_t>(xs.size());
  }
  return out;
}

RunResult run_post_cover(const ExperimentPlan& plan, bool keep_raw) {
  require_common(plan, PlanKind::post_cover);
  require(plan.epsilon > 0.0, "post_cover: epsilon must be positive");
  require(plan.n >= 1, "post_cover: n must be >= 1");
  std::vector<std::int64_t> cps = plan.checkpoints;
  if (cps.empty()) cps.push_back(plan.n);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    require(cps[i] >= 1 && cps[i] <= plan.n, "post_cover: checkpoints must lie in [1, n]");
    require(i == 0 || cps[i - 1] < cps[i], "post_cover: checkpoints must be strictly increasing");
  }

  const std::size_t C = cps.size();
  const std::size_t T = static_cast<std::size_t>(plan.trials);
  const std::uint64_t base = stream_base(plan, plan.epsilon);
  std::vector<double> win(T * C), cum(T * C), lpath(T * C), dep(T * C), hei(T * C);
  parallel_for_trials(plan.trials, plan.parallelism, [&](std::int64_t tr) {
    RngStream rng(plan.seed, base ^ static_cast<std::uint64_t>(tr));
    Tree t = Tree::rrt(Point(plan.d), plan.epsilon);
    t.reserve(static_cast<std::size_t>(plan.n) + 1);
    NnIndex idx = make_index(t);
    std::vector<double> delta(static_cast<std::size_t>(plan.n) + 1, 0.0);
    double total_len = 0.0;
    std::size_t ci = 0;
    for (std::int64_t step = 1; step <= plan.n; ++step) {
      const StepOutcome o = rrt_step(t, idx, rng);
      const double e = t.edge_length(o.new_vertex);
      delta[static_cast<std::size_t>(step)] = e;
      total_len += e;
      if (ci < C && step == cps[ci]) {
        double sum = 0.0;
        std::int64_t cnt = 0;
        for (std::int64_t j = step / 2 + 1; j <= step; ++j) {
          sum += delta[static_cast<std::size_t>(j)] *
                 std::sqrt(std::numbers::pi * static_cast<double>(j));
          ++cnt;
        }
        const std::size_t slot = static_cast<std::size_t>(tr) * C + ci;
        win[slot] = sum / static_cast<double>(cnt);
        cum[slot] = total_len / std::sqrt(static_cast<double>(step));
        lpath[slot] = t.root_path_length(static_cast<std::size_t>(step));
        dep[slot] = static_cast<double>(t.depth(static_cast<std::size_t>(step)));
        hei[slot] = static_cast<double>(t.height());
        ++ci;
      }
    }
  });

  RunResult out;
  out.trials = plan.trials;
  const struct {
    const char* name;
    const std::vector<double>* slots;
  } stats[] = {{"post_cover/delta_scaled", &win},
               {"post_cover/cum_over_sqrt", &cum},
               {"post_cover/root_path", &lpath},
               {"post_cover/depth", &dep},
               {"post_cover/height", &hei}};
  for (const auto& st : stats) {
    for (std::size_t ci = 0; ci < C; ++ci) {
      std::vector<double> column(T);
      for (std::size_t tr = 0; tr < T; ++tr) column[tr] = (*st.slots)[tr * C + ci];
      aggregate_row(out, st.name, plan, plan.epsilon, cps[ci], column, nullptr);
      for (std::size_t tr = 0; keep_raw && tr < T; ++tr) {
        push_raw(out.raw, st.name, plan.epsilon, cps[ci], static_cast<std::int64_t>(tr),
                 column[tr]);
      }
    }
  }
  return out;
}

RunResult run_nnt_stats(const ExperimentPlan& plan, bool keep_raw) {
  require_common(plan, PlanKind::nnt_stats);
  require(plan.n >= 2, "nnt_stats: n must be >= 2");
  require(plan.epsilon >= 0.0, "nnt_stats: epsilon must be >= 0");

  const std::size_t T = static_cast<std::size_t>(plan.trials);
  const double log_n = std::log(static_cast<double>(plan.n));
  // the nnt and oracle arms ignore epsilon, so their streams hash it as 0 and
  // stay identical across plans that differ only in the rrt arm's step size
  const std::uint64_t base = stream_base(plan, 0.0);
  const std::uint64_t oracle_base = config_hash(plan, 0.0, "oracle");
  const std::uint64_t rrt_base = config_hash(plan, plan.epsilon, "rrt");
  const bool rrt_arm = plan.epsilon > 0.0;

  std::vector<double> ddep(T), dhei(T), dwin(T), odep(T);
  std::vector<double> rdep, rhei, rwin;
  if (rrt_arm) {
    rdep.resize(T);
    rhei.resize(T);
    rwin.resize(T);
  }
  parallel_for_trials(plan.trials, plan.parallelism, [&](std::int64_t tr) {
    const auto i = static_cast<std::size_t>(tr);
    const std::int64_t wlo = plan.n / 2;  // window (n/2, n]
    {
      RngStream rng(plan.seed, base ^ static_cast<std::uint64_t>(tr));
      Tree t = Tree::nnt(uniform_sample(plan.d, rng));
      t.reserve(static_cast<std::size_t>(plan.n) + 1);
      NnIndex idx = make_index(t);
      double wsum = 0.0;
      std::int64_t wcnt = 0;
      for (std::int64_t step = 1; step <= plan.n; ++step) {
        const StepOutcome o = nnt_step(t, idx, rng);
        if (step > wlo) {
          wsum += t.edge_length(o.new_vertex) *
                  std::sqrt(std::numbers::pi * static_cast<double>(step));
          ++wcnt;
        }
      }
      ddep[i] = static_cast<double>(t.depth(static_cast<std::size_t>(plan.n)));
      dhei[i] = static_cast<double>(t.height());
      dwin[i] = wsum / static_cast<double>(wcnt);
    }
    {
      RngStream rng(plan.seed, oracle_base ^ static_cast<std::uint64_t>(tr));
      odep[i] = static_cast<double>(depth_model_sample(plan.n, rng));
    }
    if (rrt_arm) {
      RngStream rng(plan.seed, rrt_base ^ static_cast<std::uint64_t>(tr));
      // root drawn uniformly like the NNT arm, so the arms differ only in the
      // growth mechanism (a corner root adds a finite-n depth transient the
      // root-invariant asymptotics do not control at fixed n)
      Tree t = Tree::rrt(uniform_sample(plan.d, rng), plan.epsilon);
      t.reserve(static_cast<std::size_t>(plan.n) + 1);
      NnIndex idx = make_index(t);
      double wsum = 0.0;
      std::int64_t wcnt = 0;
      for (std::int64_t step = 1; step <= plan.n; ++step) {
        const StepOutcome o = rrt_step(t, idx, rng);
        if (step > wlo) {
          wsum += t.edge_length(o.new_vertex) *
                  std::sqrt(std::numbers::pi * static_cast<double>(step));
          ++wcnt;
        }
      }
      rdep[i] = static_cast<double>(t.depth(static_cast<std::size_t>(plan.n)));
      rhei[i] = static_cast<double>(t.height());
      rwin[i] = wsum / static_cast<double>(wcnt);
    }
  });

  RunResult out;
  out.trials = plan.trials;
  auto ratio_of = [&](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / log_n;
    return r;
  };
  aggregate_row(out, "nnt_stats/depth", plan, 0.0, plan.n, ddep, nullptr);
  aggregate_row(out, "nnt_stats/height", plan, 0.0, plan.n, dhei, nullptr);
  aggregate_row(out, "nnt_stats/depth_over_log", plan, 0.0, plan.n, ratio_of(ddep), nullptr);
  aggregate_row(out, "nnt_stats/height_over_log", plan, 0.0, plan.n, ratio_of(dhei), nullptr);
  aggregate_row(out, "nnt_stats/delta_scaled", plan, 0.0, plan.n, dwin, nullptr);
  aggregate_row(out, "nnt_stats/oracle_depth", plan, 0.0, plan.n, odep, nullptr);
  {
    AggregateRow r = const_row("nnt_stats/depth_ks", plan.d, 0.0, plan.n,
                               ks_statistic(ddep, odep));
    r.trials = plan.trials;
    out.rows.push_back(std::move(r));
  }
  if (rrt_arm) {
    aggregate_row(out, "nnt_stats/rrt_depth", plan, plan.epsilon, plan.n, rdep, nullptr);
    aggregate_row(out, "nnt_stats/rrt_height", plan, plan.epsilon, plan.n, rhei, nullptr);
    aggregate_row(out, "nnt_stats/rrt_depth_over_log", plan, plan.epsilon, plan.n,
                  ratio_of(rdep), nullptr);
    aggregate_row(out, "nnt_stats/rrt_height_over_log", plan, plan.epsilon, plan.n,
                  ratio_of(rhei), nullptr);
    aggregate_row(out, "nnt_stats/rrt_delta_scaled", plan, plan.epsilon, plan.n, rwin, nullptr);
  }
  if (keep_raw) {
    for (std::size_t tr = 0; tr < T; ++tr) {
      const auto itr = static_cast<std::int64_t>(tr);
      push_raw(out.raw, "nnt_depth", 0.0, plan.n, itr, ddep[tr]);
      push_raw(out.raw, "nnt_height", 0.0, plan.n, itr, dhei[tr]);
      push_raw(out.raw, "nnt_delta_scaled", 0.0, plan.n, itr, dwin[tr]);
      push_raw(out.raw, "oracle_depth", 0.0, plan.n, itr, odep[tr]);
      if (rrt_arm) {
        push_raw(out.raw, "rrt_depth", plan.epsilon, plan.n, itr, rdep[tr]);
        push_raw(out.raw, "rrt_height", plan.epsilon, plan.n, itr, rhei[tr]);
        push_raw(out.raw, "rrt_delta_scaled", plan.epsilon, plan.n, itr, rwin[tr]);
      }
    }
  }
  return out;
}

RunResult run_coupon(const ExperimentPlan& plan, bool keep_raw) {
  require_common(plan, PlanKind::coupon);
  require(plan.n >= 1, "coupon: n must be >= 1");

  const std::size_t T = static_cast<std::size_t>(plan.trials);
  const std::uint64_t base = stream_base(plan, 0.0);
  std::vector<double> value(T);
  parallel_for_trials(plan.trials, plan.parallelism, [&](std::int64_t tr) {
    RngStream rng(plan.seed, base ^ static_cast<std::uint64_t>(tr));
    value[static_cast<std::size_t>(tr)] = static_cast<double>(coupon_simulate(plan.n, rng));
  });

  RunResult out;
  out.trials = plan.trials;
  aggregate_row(out, "coupon", plan, 0.0, plan.n, value, nullptr);
  out.rows.push_back(const_row("coupon/expected", plan.d, 0.0, plan.n, coupon_expected(plan.n)));
  for (std::size_t tr = 0; keep_raw && tr < T; ++tr) {
    push_raw(out.raw, "coupon", 0.0, plan.n, static_cast<std::int64_t>(tr), value[tr]);
  }
  return out;
}

RunResult run_plan(const ExperimentPlan& plan, bool keep_raw) {
  switch (plan.kind) {
    case PlanKind::hit_time: return run_hit_time(plan, keep_raw);
    case PlanKind::cover_time: return run_cover_time(plan, keep_raw);
    case PlanKind::post_cover: return run_post_cover(plan, keep_raw);
    case PlanKind::nnt_stats: return run_nnt_stats(plan, keep_raw);
    case PlanKind::coupon: return run_coupon(plan, keep_raw);
  }
  throw std::invalid_argument("run_plan: unknown plan kind");
}

double cap_height(double delta, double z) {
  require(delta >= 0.0, "cap_height: delta must be >= 0");
  require(z > 0.0, "cap_height: z must be > 0");
  return std::sqrt(delta * delta + z * z) - z;
}

std::string rows_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "kind,d,epsilon,n_or_step,trials,mean,ci95,censored\n";
  for (const AggregateRow& r : rows) {
    out += r.kind;
    out += ',';
    out += std::to_string(r.d);
    out += ',';
    out += format_double(r.epsilon);
    out += ',';
    out += std::to_string(r.n_or_step);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += format_double(r.mean);
    out += ',';
    out += format_double(r.ci95);
    out += ',';
    out += std::to_string(r.censored);
    out += '\n';
  }
  return out;
}

std::string rows_to_json(const std::vector<AggregateRow>& rows, const ExperimentPlan& plan) {
  nlohmann::json j;
  j["meta"] = {{"generator_name", RngStream::kGeneratorName},
               {"seed", plan.seed},
               {"kind", to_string(plan.kind)},
               {"d", plan.d},
               {"trials", plan.trials}};
  nlohmann::json arr = nlohmann::json::array();
  for (const AggregateRow& r : rows) {
    arr.push_back({{"kind", r.kind},
                   {"d", r.d},
                   {"epsilon", r.epsilon},
                   {"n_or_step", r.n_or_step},
                   {"trials", r.trials},
                   {"mean", r.mean},
                   {"ci95", r.ci95},
                   {"censored", r.censored}});
  }
  j["rows"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string raw_to_csv(const std::vector<std::string>& raw_lines) {
  std::string out = "stat,epsilon,n_or_step,trial,value\n";
  for (const std::string& line : raw_lines) {
    out += line;
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp(path + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("rename failed for " + target.string() + ": " + ec.message());
  }
}

}  // namespace rrtsim

#include "alice/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include "alice/svg_plot.hpp"

namespace alice {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::unique_ptr<Controller> make_controller(const ExperimentConfig& cfg, std::string_view name, std::uint64_t seed,
                                            const std::optional<LqrSolution>& lqr) {
  if (name == "alice") return std::make_unique<AliceController>(cfg.plant.B, cfg.alice, seed);
  if (name == "lqr_oracle") return baseline_policy(BaselineKind::lqr_oracle, cfg.plant.m, seed, lqr);
  if (name == "zero") return baseline_policy(BaselineKind::zero, cfg.plant.m, seed);
  if (name == "random") return baseline_policy(BaselineKind::random, cfg.plant.m, seed);
  throw ConfigError("unknown controller '" + std::string(name) + "'");
}

/// Multiplier of the squared-norm constraint ||v||^2 <= r^2, which is the
/// form the gain-drift bound is written for; dual_estimate reports the one
/// for ||v|| <= r.
double squared_form_multiplier(const Decision& d) {
  if (!d.solve || !d.constraint_radius || *d.constraint_radius <= 0.0) return 0.0;
  return d.solve->nu_estimate / (2.0 * *d.constraint_radius);
}

double metric_value(const RolloutRecord& r, Metric m) {
  switch (m) {
    case Metric::x_norm2: return r.x_norm2;
    case Metric::x_norm_inf: return r.x_norm_inf;
    case Metric::loss: return r.loss;
    case Metric::cum_loss: return r.cum_loss;
    case Metric::regret: return r.regret.value_or(kNaN);
    case Metric::gain_drift: return r.gain_drift;
    case Metric::zeta: return r.zeta.value_or(kNaN);
  }
  return kNaN;
}

Mode parse_mode(const std::string& s) {
  if (s == "warmup") return Mode::warmup;
  if (s == "active") return Mode::active;
  if (s == "coast") return Mode::coast;
  throw ConfigError("unknown mode '" + s + "' in rollouts.csv");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}

}  // namespace

std::vector<double> Rollout::losses() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.loss);
  return out;
}

bool RunResult::all_diverged() const {
  return !rollouts.empty() &&
         std::all_of(rollouts.begin(), rollouts.end(), [](const Rollout& r) { return r.diverged_at.has_value(); });
}

const Rollout* RunResult::find(std::string_view controller, std::uint64_t seed) const {
  for (const auto& r : rollouts) {
    if (r.controller == controller && r.seed == seed) return &r;
  }
  return nullptr;
}

std::vector<const Rollout*> RunResult::by_controller(std::string_view controller) const {
  std::vector<const Rollout*> out;
  for (const auto& r : rollouts) {
    if (r.controller == controller) out.push_back(&r);
  }
  return out;
}

Rollout simulate(const ExperimentConfig& cfg, std::string_view name, std::uint64_t seed,
                 const std::optional<LqrSolution>& lqr) {
  Rollout out;
  out.controller = std::string(name);
  out.seed = seed;

  Plant plant(cfg.plant, seed);
  std::unique_ptr<Controller> ctrl = make_controller(cfg, name, seed, lqr);
  auto* alice = dynamic_cast<AliceController*>(ctrl.get());
  const double eta = cfg.alice.eta;
  const double beta = cfg.alice.beta;

  Vector x = plant.observe();
  // Trailing window for the gain-drift bound: x_{t-1}, x_{t-2}, u_{t-1}.
  std::optional<Vector> x_prev, x_prev2, u_prev;
  double nu_prev = 0.0;
  double cum = 0.0;
  out.records.reserve(static_cast<std::size_t>(cfg.horizon));

  for (std::int64_t t = 0; t < cfg.horizon; ++t) {
    const Matrix K_before = alice ? alice->gain().K : Matrix();
    const Vector u = ctrl->act(x);

    RolloutRecord row;
    row.t = t + 1;
    row.seed = seed;
    row.controller = out.controller;

    double nu_now = 0.0;
    if (alice) {
      const Decision& d = alice->last_decision();
      row.mode = d.mode;
      row.gain_drift = d.gain_drift;
      row.constraint_active = d.solve && d.solve->constraint_active;
      row.converged = !d.fallback && (!d.solve || d.solve->converged);
      nu_now = squared_form_multiplier(d);
      if (d.mode == Mode::active && t >= 2 && x_prev && x_prev2 && u_prev) {
        ZetaInputs zi;
        zi.S = alice->history().S();
        zi.B = cfg.plant.B;
        zi.eta = eta;
        zi.beta = beta;
        zi.nu_t = nu_prev;
        zi.nu_t1 = nu_now;
        zi.x_t = x;
        zi.x_prev = *x_prev;
        zi.x_prev2 = *x_prev2;
        zi.u_prev = *u_prev;
        zi.u_hat_prev2 = K_before * *x_prev2;
        row.zeta = zeta_bound(zi);
      }
    }

    Vector x_next;
    try {
      x_next = plant.step(u);
    } catch (const DivergenceError& e) {
      out.diverged_at = e.step();
      break;
    }
    ctrl->observe(x, u, x_next);

    row.x_norm2 = x_next.norm();
    row.x_norm_inf = x_next.cwiseAbs().maxCoeff();
    row.loss = step_loss(x_next, u, eta, beta);
    cum += row.loss;
    row.cum_loss = cum;
    out.records.push_back(std::move(row));

    x_prev2 = std::move(x_prev);
    x_prev = x;
    u_prev = u;
    nu_prev = nu_now;
    x = std::move(x_next);
  }
  out.noise_digest = plant.noise_digest();
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("ALICE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_experiment(const ExperimentConfig& cfg, unsigned workers) {
  cfg.validate();
  RunResult run;
  run.config = cfg;
  try {
    run.lqr = solve_dare(cfg.plant.a_schedule.at(0), cfg.plant.B, cfg.alice.eta, cfg.alice.beta);
  } catch (const NotStabilizableError&) {
    run.lqr.reset();
  }
  if (!run.lqr && std::find(cfg.controllers.begin(), cfg.controllers.end(), "lqr_oracle") != cfg.controllers.end()) {
    throw ConfigError("lqr_oracle requested but the initial (A, B) pair is not stabilizable");
  }

  const std::size_t per_seed = cfg.controllers.size();
  std::vector<Rollout> slots(cfg.seeds.size() * per_seed);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t s = next++; s < cfg.seeds.size(); s = next++) {
      const std::uint64_t seed = cfg.seeds[s];
      std::optional<Rollout> reference;
      if (run.lqr) reference = simulate(cfg, "lqr_oracle", seed, run.lqr);
      for (std::size_t c = 0; c < per_seed; ++c) {
        const std::string& name = cfg.controllers[c];
        Rollout r = (name == "lqr_oracle" && reference) ? *reference : simulate(cfg, name, seed, run.lqr);
        for (std::size_t i = 0; i < r.records.size(); ++i) {
          if (!reference) {
            r.records[i].regret = r.records[i].cum_loss;
          } else if (i < reference->records.size()) {
            r.records[i].regret = r.records[i].cum_loss - reference->records[i].cum_loss;
          }
        }
        slots[s * per_seed + c] = std::move(r);
      }
    }
  };

  if (workers == 0) workers = default_workers();
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.seeds.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  run.rollouts = std::move(slots);
  return run;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::x_norm2: return "x_norm2";
    case Metric::x_norm_inf: return "x_norm_inf";
    case Metric::loss: return "loss";
    case Metric::cum_loss: return "cum_loss";
    case Metric::regret: return "regret";
    case Metric::gain_drift: return "gain_drift";
    case Metric::zeta: return "zeta";
  }
  return "unknown";
}

std::vector<AggregateRow> aggregate(const RunResult& run, std::string_view controller) {
  const auto rollouts = run.by_controller(controller);
  std::vector<AggregateRow> rows(static_cast<std::size_t>(run.config.horizon));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    AggregateRow& row = rows[i];
    row.t = static_cast<std::int64_t>(i) + 1;
    for (std::size_t k = 0; k < kMetrics.size(); ++k) {
      std::vector<double> values;
      for (const Rollout* r : rollouts) {
        if (i >= r->records.size()) continue;
        const double v = metric_value(r->records[i], kMetrics[k]);
        if (std::isfinite(v)) values.push_back(v);
      }
      if (k == 0) {
        row.seeds = static_cast<std::size_t>(
            std::count_if(rollouts.begin(), rollouts.end(), [&](const Rollout* r) { return i < r->records.size(); }));
      }
      if (!values.empty()) {
        row.stats[k] = Quartiles{quantile(values, 0.5), quantile(values, 0.25), quantile(values, 0.75)};
      }
    }
  }
  return rows;
}

std::vector<double> median_curve(const std::vector<AggregateRow>& rows, Metric metric) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[metric] ? r[metric]->median : kNaN);
  return out;
}

void write_rollouts_csv(const RunResult& run, std::ostream& out) {
  out << kRolloutCsvHeader << '\n';
  for (const auto& r : run.rollouts) {
    for (const auto& row : r.records) {
      out << row.t << ',' << row.seed << ',' << row.controller << ',' << fmt_double(row.x_norm2) << ','
          << fmt_double(row.x_norm_inf) << ',' << fmt_double(row.loss) << ',' << fmt_double(row.cum_loss) << ','
          << fmt_optional(row.regret) << ',' << fmt_double(row.gain_drift) << ',' << fmt_optional(row.zeta) << ','
          << (row.constraint_active ? 1 : 0) << ',' << to_string(row.mode) << ',' << (row.converged ? 1 : 0)
          << '\n';
    }
  }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  out << "t,seeds";
  for (Metric m : kMetrics) {
    out << ',' << to_string(m) << "_median," << to_string(m) << "_q25," << to_string(m) << "_q75";
  }
  out << '\n';
  for (const auto& row : rows) {
    out << row.t << ',' << row.seeds;
    for (Metric m : kMetrics) {
      if (const auto& q = row[m]) {
        out << ',' << fmt_double(q->median) << ',' << fmt_double(q->q25) << ',' << fmt_double(q->q75);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }
}

std::vector<std::filesystem::path> write_outputs(const RunResult& run, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  auto open = [&](const std::string& name) {
    const fs::path path = out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
    return f;
  };

  {
    auto f = open("rollouts.csv");
    write_rollouts_csv(run, f);
  }

  std::vector<PlotSeries> regret_series, norm_series;
  std::vector<double> ts(static_cast<std::size_t>(run.config.horizon));
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i + 1);
  for (const auto& name : run.config.controllers) {
    const auto rows = aggregate(run, name);
    {
      auto f = open("aggregate_" + name + ".csv");
      write_aggregate_csv(rows, f);
    }
    regret_series.push_back({name, ts, median_curve(rows, Metric::regret)});
    norm_series.push_back({name, ts, median_curve(rows, Metric::x_norm2)});
  }

  if (run.config.emit_svg) {
    {
      auto f = open("regret.svg");
      f << render_line_plot({run.config.name + ": median regret", "t", "regret", false}, regret_series);
    }
    {
      auto f = open("state_norm.svg");
      f << render_line_plot({run.config.name + ": median ||x_t||_2", "t", "||x_t||_2", true}, norm_series);
    }
  }

  json rollouts = json::array();
  for (const auto& r : run.rollouts) {
    rollouts.push_back({{"controller", r.controller},
                        {"seed", r.seed},
                        {"steps", r.records.size()},
                        {"diverged_at", r.diverged_at ? json(*r.diverged_at) : json(nullptr)},
                        {"noise_digest", hex64(r.noise_digest)}});
  }
  json lqr = nullptr;
  if (run.lqr) {
    json K = json::array();
    for (Eigen::Index i = 0; i < run.lqr->K_star.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < run.lqr->K_star.cols(); ++k) row.push_back(run.lqr->K_star(i, k));
      K.push_back(row);
    }
    lqr = {{"K_star", K},
           {"closed_loop_radius", run.lqr->closed_loop_radius},
           {"residual", run.lqr->residual},
           {"reference", "infinite-horizon LQR gain of A at t = 0"}};
  }
  json files = json::array();
  for (const auto& p : written) files.push_back(p.filename().string());
  files.push_back("manifest.json");
  const json manifest = {{"artifact", "alice-bench"},
                         {"version", std::string(kArtifactVersion)},
                         {"config", config_to_json(run.config)},
                         {"lqr", lqr},
                         {"rollouts", rollouts},
                         {"files", files}};
  {
    auto f = open("manifest.json");
    f << manifest.dump(2) << '\n';
  }
  return written;
}

RunResult load_run(const std::filesystem::path& run_dir) {
  RunResult run;
  {
    std::ifstream f(run_dir / "manifest.json");
    if (!f) throw ConfigError("no manifest.json in " + run_dir.string());
    json manifest;
    try {
      f >> manifest;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("manifest.json: ") + e.what());
    }
    run.config = config_from_json(manifest.at("config"));
    for (const auto& r : manifest.at("rollouts")) {
      Rollout ro;
      ro.controller = r.at("controller").get<std::string>();
      ro.seed = r.at("seed").get<std::uint64_t>();
      if (!r.at("diverged_at").is_null()) ro.diverged_at = r.at("diverged_at").get<std::int64_t>();
      ro.noise_digest = std::stoull(r.at("noise_digest").get<std::string>(), nullptr, 16);
      run.rollouts.push_back(std::move(ro));
    }
  }

  std::ifstream f(run_dir / "rollouts.csv");
  if (!f) throw ConfigError("no rollouts.csv in " + run_dir.string());
  std::string line;
  std::getline(f, line);
  if (line != kRolloutCsvHeader) throw ConfigError("rollouts.csv has an unexpected header");
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 13) throw ConfigError("rollouts.csv: malformed row '" + line + "'");
    RolloutRecord row;
    row.t = std::stoll(fields[0]);
    row.seed = std::stoull(fields[1]);
    row.controller = fields[2];
    row.x_norm2 = std::strtod(fields[3].c_str(), nullptr);
    row.x_norm_inf = std::strtod(fields[4].c_str(), nullptr);
    row.loss = std::strtod(fields[5].c_str(), nullptr);
    row.cum_loss = std::strtod(fields[6].c_str(), nullptr);
    row.regret = parse_optional(fields[7]);
    row.gain_drift = std::strtod(fields[8].c_str(), nullptr);
    row.zeta = parse_optional(fields[9]);
    row.constraint_active = fields[10] == "1";
    row.mode = parse_mode(fields[11]);
    row.converged = fields[12] == "1";
    auto it = std::find_if(run.rollouts.begin(), run.rollouts.end(), [&](const Rollout& r) {
      return r.controller == row.controller && r.seed == row.seed;
    });
    if (it == run.rollouts.end()) throw ConfigError("rollouts.csv row for a rollout missing from the manifest");
    it->records.push_back(std::move(row));
  }
  return run;
}

std::vector<CompareRow> compare(const RunResult& run) {
  std::vector<CompareRow> out;
  const auto horizon = static_cast<std::size_t>(run.config.horizon);
  const std::size_t tail = std::max<std::size_t>(1, horizon / 5);
  for (const auto& name : run.config.controllers) {
    CompareRow row;
    row.controller = name;
    const auto rows = aggregate(run, name);
    const auto rollouts = run.by_controller(name);
    row.rollouts = rollouts.size();

    if (const auto& last = rows.back()[Metric::regret]) row.terminal_median_regret = last->median;

    const auto norms = median_curve(rows, Metric::x_norm2);
    auto window_mean = [&](std::size_t begin, std::size_t end) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t i = begin; i < end && i < norms.size(); ++i) {
        if (std::isfinite(norms[i])) sum += norms[i], ++n;
      }
      return n ? sum / static_cast<double>(n) : kNaN;
    };
    row.steady_state_norm = window_mean(horizon - tail, horizon);
    const double early = window_mean(tail, 2 * tail);
    row.growing = !std::isfinite(row.steady_state_norm) || row.steady_state_norm > 4.0 * early;

    ContractionCount pooled;
    std::size_t active = 0, converged = 0;
    for (const Rollout* r : rollouts) {
      if (r->diverged_at) ++row.diverged;
      const ContractionCount c = contraction_count(r->records, run.config.alice.alpha);
      pooled.held += c.held;
      pooled.counted += c.counted;
      for (const auto& rec : r->records) {
        if (rec.mode != Mode::active) continue;
        ++active;
        if (rec.converged) ++converged;
      }
    }
    if (name == "alice") {
      if (pooled.counted) row.contraction_frequency = static_cast<double>(pooled.held) / pooled.counted;
      if (active) row.convergence_rate = static_cast<double>(converged) / active;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_compare(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %16s %14s %12s %12s %10s  %s\n", "controller", "median_regret_T",
                "steady_|x|_2", "contraction", "converged", "diverged", "flags");
  os << buf;
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", *v);
    return std::string(b);
  };
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-12s %16s %14.6g %12s %12s %6zu/%-3zu  %s\n", r.controller.c_str(),
                  opt(r.terminal_median_regret).c_str(), r.steady_state_norm, opt(r.contraction_frequency).c_str(),
                  opt(r.convergence_rate).c_str(), r.diverged, r.rollouts, r.growing ? "state-norm-growing" : "");
    os << buf;
  }
  return os.str();
}

}  // namespace alice

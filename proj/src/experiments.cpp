#include "lipvol/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lipvol/exact_count.hpp"
#include "lipvol/graph.hpp"
#include "lipvol/profile.hpp"
#include "lipvol/qseries.hpp"
#include "lipvol/rng.hpp"
#include "lipvol/stats.hpp"
#include "lipvol/version.hpp"
#include "lipvol/volume_mc.hpp"

namespace lipvol::experiments {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw std::invalid_argument("config: " + key + " expects a nonnegative integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out)) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  }
  return out;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ExperimentRecord new_record(const ExperimentConfig& cfg) {
  ExperimentRecord rec;
  rec.schema_version = kReportSchemaVersion;
  rec.library_version = kVersion;
  rec.config = cfg;
  return rec;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct ReplicaResult {
  bool usable = false;
  bool exact = false;
  double value = 0.0;   // log c estimate
  double mc_err = 0.0;  // within-replica standard error
  double zero_weight_fraction = 0.0;
  double giant = 0.0;
};

ReplicaResult run_replica(const ExperimentConfig& cfg, double d, std::uint64_t stream_seed) {
  ReplicaResult res;
  const Graph g = gen_gnp(cfg.n, d, substream_seed(stream_seed, 0));
  if (cfg.n <= cfg.exact_max_n) {
    const auto e = exact::ehrhart_c(g);
    res.usable = true;
    res.exact = true;
    res.value = e.D == 0 ? 0.0 : log_of(e.leading) / static_cast<double>(e.D);
    res.giant = static_cast<double>(largest_component(g).size());
    return res;
  }
  const auto giant = largest_component(g);
  res.giant = static_cast<double>(giant.size());
  if (giant.size() < 2) {
    res.zero_weight_fraction = 1.0;
    return res;
  }
  const Graph sub = induced_subgraph(g, giant);
  const std::uint64_t est_seed = substream_seed(stream_seed, 1);
  const auto est = cfg.estimator == Estimator::Smc ? mc::smc_log_volume(sub, cfg.samples, est_seed)
                                                   : mc::sis_log_volume(sub, cfg.samples, est_seed);
  res.zero_weight_fraction = est.zero_weight_fraction;
  if (est.zero_weight_fraction >= 1.0 || !std::isfinite(est.log_mean)) return res;
  const double scale = static_cast<double>(giant.size() - 1);
  res.usable = true;
  res.value = est.log_mean / scale;
  res.mc_err = est.stderr_log / scale;
  return res;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt_json(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }
json opt_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string to_string(Kind k) {
  switch (k) {
    case Kind::RandomGraphSweep: return "random-graph-sweep";
    case Kind::HypercubeSuite: return "hypercube-suite";
    case Kind::QseriesReport: return "qseries-report";
    case Kind::ProfileReport: return "profile-report";
  }
  return "unknown";
}

Kind parse_kind(const std::string& text) {
  for (Kind k : {Kind::RandomGraphSweep, Kind::HypercubeSuite, Kind::QseriesReport,
                 Kind::ProfileReport}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("config: unknown kind '" + text + "'");
}

std::string to_string(Estimator e) { return e == Estimator::Smc ? "smc" : "sis"; }

Estimator parse_estimator(const std::string& text) {
  if (text == "smc") return Estimator::Smc;
  if (text == "sis") return Estimator::Sis;
  throw std::invalid_argument("config: unknown estimator '" + text + "'");
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "kind") {
    cfg.kind = parse_kind(value);
  } else if (key == "n") {
    cfg.n = parse_u64(key, value);
  } else if (key == "d_list") {
    cfg.d_list.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) cfg.d_list.push_back(parse_double(key, item));
    }
  } else if (key == "T_rule") {
    cfg.T_rule = value;
  } else if (key == "samples") {
    cfg.samples = parse_u64(key, value);
  } else if (key == "replicas") {
    cfg.replicas = parse_u64(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "output_path") {
    cfg.output_path = value;
  } else if (key == "L") {
    cfg.L = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "exact_max_n") {
    cfg.exact_max_n = parse_u64(key, value);
  } else if (key == "estimator") {
    cfg.estimator = parse_estimator(value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("config: expected key=value, got '" + assignment + "'");
  }
  apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_override(cfg, line);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

double window_T(const ExperimentConfig& cfg, double d) {
  if (cfg.T_rule == "logd") return std::log(d);
  if (cfg.T_rule.rfind("fixed:", 0) == 0) return parse_double("T_rule", cfg.T_rule.substr(6));
  throw std::invalid_argument("config: T_rule must be 'logd' or 'fixed:<x>', got '" + cfg.T_rule + "'");
}

void validate(const ExperimentConfig& cfg) {
  const bool needs_d = cfg.kind != Kind::HypercubeSuite;
  if (needs_d && cfg.d_list.empty()) throw std::invalid_argument("config: d_list must be nonempty");
  if (cfg.samples < 1000) throw std::invalid_argument("config: samples must be >= 1000");
  if (cfg.threads == 0) throw std::invalid_argument("config: threads must be >= 1");
  if (cfg.L < 5) throw std::invalid_argument("config: L must be >= 5");
  const double T = window_T(cfg, 2.0);
  if (!(T > 0.0)) throw std::invalid_argument("config: T must be positive");
  switch (cfg.kind) {
    case Kind::RandomGraphSweep:
      if (cfg.n < 2) throw std::invalid_argument("config: n must be >= 2");
      if (cfg.replicas == 0) throw std::invalid_argument("config: replicas must be >= 1");
      for (double d : cfg.d_list) {
        if (!(d > 0.0) || d >= static_cast<double>(cfg.n)) {
          throw std::invalid_argument("config: every d must satisfy 0 < d < n");
        }
      }
      break;
    case Kind::QseriesReport:
      for (double d : cfg.d_list) {
        if (!(d > 0.0) || d >= static_cast<double>(cfg.n)) {
          throw std::invalid_argument("config: every d must satisfy 0 < d < n");
        }
      }
      break;
    case Kind::ProfileReport:
      for (double d : cfg.d_list) {
        if (!(d >= 2.0)) throw std::invalid_argument("config: profile needs d >= 2");
      }
      break;
    case Kind::HypercubeSuite:
      break;
  }
}

ExperimentRow make_row(double d) {
  ExperimentRow row;
  row.d = d;
  row.target = kPi2 / (6.0 * d);
  row.old_lower = 1.0 / (2.0 * d);
  const double ld = std::log(d);
  row.old_upper = 4.0 * ld * ld / d;
  return row;
}

bool ExperimentRecord::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ExperimentRecord run_random_graph_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  auto rec = new_record(cfg);
  for (std::size_t di = 0; di < cfg.d_list.size(); ++di) {
    const double d = cfg.d_list[di];
    const std::uint64_t d_seed = substream_seed(cfg.seed, di);
    std::vector<ReplicaResult> results(cfg.replicas);
    parallel_for(results.size(), cfg.threads, [&](std::size_t r) {
      results[r] = run_replica(cfg, d, substream_seed(d_seed, r));
    });

    ExperimentRow row = make_row(d);
    RunningStats values, errs, zeros, giants;
    bool all_exact = true;
    for (const auto& res : results) {
      zeros.add(res.zero_weight_fraction);
      giants.add(res.giant);
      all_exact = all_exact && res.exact;
      if (!res.usable) continue;
      values.add(res.value);
      errs.add(res.mc_err);
    }
    row.usable_replicas = values.count();
    row.usable = values.count() > 0;
    row.exact = all_exact;
    row.zero_weight_fraction = zeros.mean();
    row.mean_giant_size = giants.mean();
    if (row.usable) {
      row.estimate = values.mean();
      row.stderr = values.count() > 1 ? values.stderr_of_mean() : 0.0;
      row.mc_stderr = errs.mean();
    }
    rec.rows.push_back(row);

    Check sandwich{"sandwich d=" + fmt(d), false, {}};
    if (row.estimate) {
      const double lo = 0.5 * row.old_lower;
      const double hi = 2.0 * row.old_upper;
      sandwich.pass = *row.estimate >= lo && *row.estimate <= hi;
      sandwich.detail = fmt(*row.estimate) + " in [" + fmt(lo) + ", " + fmt(hi) + "]";
    } else {
      sandwich.detail = "row unusable: zero_weight_fraction " + fmt(row.zero_weight_fraction);
    }
    rec.checks.push_back(sandwich);
  }

  if (rec.rows.size() >= 2) {
    std::vector<const ExperimentRow*> sorted;
    for (const auto& r : rec.rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const ExperimentRow* a, const ExperimentRow* b) { return a->d < b->d; });
    Check trend{"trend |d*estimate - pi^2/6| non-increasing", true, {}};
    double prev = std::numeric_limits<double>::infinity();
    for (const auto* r : sorted) {
      if (!r->estimate) {
        trend.pass = false;
        trend.detail += "d=" + fmt(r->d) + ": unusable; ";
        continue;
      }
      const double dev = std::abs(r->d * *r->estimate - kPi2 / 6.0);
      trend.detail += "d=" + fmt(r->d) + ": " + fmt(dev) + "; ";
      if (dev > prev) trend.pass = false;
      prev = dev;
    }
    rec.checks.push_back(trend);
  }
  rec.wall_time = elapsed(t0);
  return rec;
}

ExperimentRecord run_hypercube_suite(unsigned L) {
  ExperimentConfig cfg;
  cfg.kind = Kind::HypercubeSuite;
  cfg.L = L;
  return run_hypercube_suite(cfg);
}

ExperimentRecord run_hypercube_suite(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  auto rec = new_record(cfg);
  const unsigned L = cfg.L;
  for (unsigned d = 2; d <= 12; ++d) {
    HypercubeRow hr;
    hr.d = d;
    const auto vd = exact::kdd_volume_exact(d);
    hr.kdd_volume_exact = to_fraction_string(vd);
    hr.kdd_volume_log = log_of(vd);
    hr.kdd_ratio = std::exp(hr.kdd_volume_log - 0.5 * std::log(std::numbers::pi) -
                            1.5 * std::log(static_cast<double>(d)));
    hr.upper_log = exact::hypercube_c_upper_log(d, L);
    hr.lower_log = kPi2 / (6.0 * d);
    ExperimentRow row = make_row(d);
    if (d <= 3) {
      const Graph q = make_hypercube(d);
      const auto e = exact::ehrhart_c(q);
      hr.volume_exact = to_fraction_string(e.leading);
      hr.exact_log_c = log_of(e.leading) / static_cast<double>(e.D);
      hr.bound_holds = exact::hypercube_bound_holds(d, L, e.leading);
      bool lift = true;
      bool gt = true;
      for (unsigned h : {1u, 2u}) {
        lift = lift && exact::lifting_check(q, h, L).pass;
        gt = gt && exact::galvin_tetali_check(d, h, L).pass;
      }
      hr.lifting_pass = lift;
      hr.galvin_tetali_pass = gt;
      row.estimate = hr.exact_log_c;
      row.exact = true;
      rec.checks.push_back({"c(Q_" + std::to_string(d) + ") <= upper bound", *hr.bound_holds,
                            "log c = " + fmt(*hr.exact_log_c) + ", upper " + fmt(hr.upper_log)});
      rec.checks.push_back({"lifting Q_" + std::to_string(d), lift, "h in {1,2}"});
      rec.checks.push_back({"galvin-tetali d=" + std::to_string(d), gt, "h in {1,2}"});
    } else {
      row.usable = false;
    }
    rec.rows.push_back(row);
    if (d == 12) {
      rec.checks.push_back({"V_12 / (sqrt(pi) 12^1.5) in [0.9, 1.1]",
                            hr.kdd_ratio >= 0.9 && hr.kdd_ratio <= 1.1, fmt(hr.kdd_ratio)});
    }
    rec.hypercube.push_back(std::move(hr));
  }
  rec.wall_time = elapsed(t0);
  return rec;
}

ExperimentRecord run_qseries_report(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  auto rec = new_record(cfg);
  const double n = static_cast<double>(cfg.n);
  for (double d : cfg.d_list) {
    ExperimentRow row = make_row(d);
    const auto lp = qseries::log_q_pochhammer_inf(1.0 - d / n);
    row.estimate = -lp.value / n;
    row.stderr = lp.err / n;
    row.exact = true;
    const double ratio = *row.estimate / row.target;
    rec.checks.push_back({"qpoch asymptotic d=" + fmt(d), std::abs(ratio - 1.0) <= 0.03,
                          "ratio " + fmt(ratio)});
    rec.rows.push_back(row);
  }
  rec.wall_time = elapsed(t0);
  return rec;
}

ExperimentRecord run_profile_report(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  auto rec = new_record(cfg);
  for (double d : cfg.d_list) {
    ExperimentRow row = make_row(d);
    const profile::ProfileParams p(d, window_T(cfg, d));
    const auto s = profile::profile_gain(p, profile::Mode::Truncated);
    row.estimate = s.gain;
    row.stderr = 0.0;
    row.exact = true;
    rec.rows.push_back(row);
  }
  rec.wall_time = elapsed(t0);
  return rec;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::RandomGraphSweep: return run_random_graph_sweep(cfg);
    case Kind::HypercubeSuite: return run_hypercube_suite(cfg);
    case Kind::QseriesReport: return run_qseries_report(cfg);
    case Kind::ProfileReport: return run_profile_report(cfg);
  }
  throw std::invalid_argument("unknown experiment kind");
}

json to_json(const ExperimentConfig& cfg) {
  return json{{"kind", to_string(cfg.kind)},
              {"n", cfg.n},
              {"d_list", cfg.d_list},
              {"T_rule", cfg.T_rule},
              {"samples", cfg.samples},
              {"replicas", cfg.replicas},
              {"seed", cfg.seed},
              {"output_path", cfg.output_path},
              {"L", cfg.L},
              {"threads", cfg.threads},
              {"exact_max_n", cfg.exact_max_n},
              {"estimator", to_string(cfg.estimator)}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.kind = parse_kind(j.at("kind").get<std::string>());
  cfg.n = j.at("n").get<std::size_t>();
  cfg.d_list = j.at("d_list").get<std::vector<double>>();
  cfg.T_rule = j.at("T_rule").get<std::string>();
  cfg.samples = j.at("samples").get<std::uint64_t>();
  cfg.replicas = j.at("replicas").get<std::uint64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.output_path = j.at("output_path").get<std::string>();
  cfg.L = j.at("L").get<unsigned>();
  cfg.threads = j.at("threads").get<unsigned>();
  cfg.exact_max_n = j.at("exact_max_n").get<std::size_t>();
  cfg.estimator = parse_estimator(j.at("estimator").get<std::string>());
  return cfg;
}

json to_json(const ExperimentRecord& rec) {
  json rows = json::array();
  for (const auto& r : rec.rows) {
    rows.push_back({{"d", r.d},
                    {"estimate", opt_json(r.estimate)},
                    {"stderr", r.stderr},
                    {"target", r.target},
                    {"old_lower", r.old_lower},
                    {"old_upper", r.old_upper},
                    {"mc_stderr", r.mc_stderr},
                    {"zero_weight_fraction", r.zero_weight_fraction},
                    {"mean_giant_size", r.mean_giant_size},
                    {"usable_replicas", r.usable_replicas},
                    {"exact", r.exact},
                    {"usable", r.usable}});
  }
  json cube = json::array();
  for (const auto& h : rec.hypercube) {
    cube.push_back({{"d", h.d},
                    {"kdd_volume_log", h.kdd_volume_log},
                    {"kdd_volume_exact", opt_json(h.kdd_volume_exact)},
                    {"kdd_ratio", h.kdd_ratio},
                    {"upper_log", h.upper_log},
                    {"lower_log", h.lower_log},
                    {"volume_exact", opt_json(h.volume_exact)},
                    {"exact_log_c", opt_json(h.exact_log_c)},
                    {"bound_holds", opt_json(h.bound_holds)},
                    {"lifting_pass", opt_json(h.lifting_pass)},
                    {"galvin_tetali_pass", opt_json(h.galvin_tetali_pass)}});
  }
  json checks = json::array();
  for (const auto& c : rec.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return json{{"schema_version", rec.schema_version},
              {"library_version", rec.library_version},
              {"config", to_json(rec.config)},
              {"rows", rows},
              {"hypercube", cube},
              {"checks", checks},
              {"all_pass", rec.all_pass()},
              {"wall_time", rec.wall_time}};
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord rec;
  rec.schema_version = j.at("schema_version").get<int>();
  if (rec.schema_version != kReportSchemaVersion) {
    throw std::invalid_argument("report: unsupported schema_version " +
                                std::to_string(rec.schema_version));
  }
  rec.library_version = j.at("library_version").get<std::string>();
  rec.config = config_from_json(j.at("config"));
  for (const auto& r : j.at("rows")) {
    ExperimentRow row;
    row.d = r.at("d").get<double>();
    row.estimate = opt_from<double>(r, "estimate");
    row.stderr = r.at("stderr").get<double>();
    row.target = r.at("target").get<double>();
    row.old_lower = r.at("old_lower").get<double>();
    row.old_upper = r.at("old_upper").get<double>();
    row.mc_stderr = r.at("mc_stderr").get<double>();
    row.zero_weight_fraction = r.at("zero_weight_fraction").get<double>();
    row.mean_giant_size = r.at("mean_giant_size").get<double>();
    row.usable_replicas = r.at("usable_replicas").get<std::uint64_t>();
    row.exact = r.at("exact").get<bool>();
    row.usable = r.at("usable").get<bool>();
    rec.rows.push_back(row);
  }
  for (const auto& h : j.at("hypercube")) {
    HypercubeRow hr;
    hr.d = h.at("d").get<unsigned>();
    hr.kdd_volume_log = h.at("kdd_volume_log").get<double>();
    hr.kdd_volume_exact = opt_from<std::string>(h, "kdd_volume_exact");
    hr.kdd_ratio = h.at("kdd_ratio").get<double>();
    hr.upper_log = h.at("upper_log").get<double>();
    hr.lower_log = h.at("lower_log").get<double>();
    hr.volume_exact = opt_from<std::string>(h, "volume_exact");
    hr.exact_log_c = opt_from<double>(h, "exact_log_c");
    hr.bound_holds = opt_from<bool>(h, "bound_holds");
    hr.lifting_pass = opt_from<bool>(h, "lifting_pass");
    hr.galvin_tetali_pass = opt_from<bool>(h, "galvin_tetali_pass");
    rec.hypercube.push_back(std::move(hr));
  }
  for (const auto& c : j.at("checks")) {
    rec.checks.push_back(
        {c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("detail").get<std::string>()});
  }
  rec.wall_time = j.at("wall_time").get<double>();
  return rec;
}

std::string rows_to_csv(const ExperimentRecord& rec) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rec.rows) {
    out += fmt(r.d) + ',' + (r.estimate ? fmt(*r.estimate) : std::string()) + ',' + fmt(r.stderr) +
           ',' + fmt(r.target) + ',' + fmt(r.old_lower) + ',' + fmt(r.old_upper) + '\n';
  }
  return out;
}

std::vector<std::string> emit_report(const ExperimentRecord& rec, const std::string& path) {
  if (path.empty()) throw std::invalid_argument("emit_report: empty output path");
  std::string base = path;
  for (const char* ext : {".json", ".csv"}) {
    const std::string e = ext;
    if (base.size() > e.size() && base.compare(base.size() - e.size(), e.size(), e) == 0) {
      base.erase(base.size() - e.size());
      break;
    }
  }
  const std::string json_path = base + ".json";
  const std::string csv_path = base + ".csv";
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + json_path);
    out << to_json(rec).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + json_path);
  }
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + csv_path);
    out << rows_to_csv(rec);
    if (!out) throw std::runtime_error("write failed: " + csv_path);
  }
  return {json_path, csv_path};
}

}  // namespace lipvol::experiments

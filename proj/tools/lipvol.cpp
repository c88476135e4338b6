// lipvol command-line driver.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lipvol/exact_count.hpp"
#include "lipvol/experiments.hpp"
#include "lipvol/graph.hpp"
#include "lipvol/profile.hpp"
#include "lipvol/qseries.hpp"
#include "lipvol/rational.hpp"
#include "lipvol/version.hpp"
#include "lipvol/volume_mc.hpp"

using nlohmann::json;
using namespace lipvol;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAssertion = 2;
constexpr int kExitResource = 3;

constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

struct SeedOption {
  std::optional<std::uint64_t> flag;

  std::uint64_t resolve() const {
    if (flag) return *flag;
    if (const char* env = std::getenv("LIPVOL_SEED")) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw std::invalid_argument(std::string("LIPVOL_SEED is not an integer: ") + env);
    }
    return 1;
  }
};

void add_seed(CLI::App* app, SeedOption& seed) {
  app->add_option("--seed", seed.flag, "RNG seed (overrides LIPVOL_SEED)");
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json estimate_json(const mc::VolumeEstimate& e) {
  return {{"mean", e.mean},
          {"stderr", e.stderr},
          {"samples", e.samples},
          {"zero_weight_fraction", e.zero_weight_fraction},
          {"seed", e.seed}};
}

json estimate_json(const mc::LogVolumeEstimate& e) {
  return {{"log_mean", e.log_mean},
          {"stderr_log", e.stderr_log},
          {"samples", e.samples},
          {"zero_weight_fraction", e.zero_weight_fraction},
          {"seed", e.seed}};
}

json census_json(const mc::TailCensus& c) {
  return {{"S", c.S}, {"U", c.U}, {"W", c.W}, {"D", c.D}};
}

json survey_json(const mc::SurveySummary& s) {
  return {{"accepted", s.accepted},
          {"median_fraction", s.median_fraction},
          {"mean_fraction", s.mean_fraction},
          {"max_fraction", s.max_fraction}};
}

profile::ProfileParams make_params(double d, std::optional<double> T) {
  return T ? profile::ProfileParams(d, *T) : profile::ProfileParams::with_default_window(d);
}

// CSV writer for --dump: sample,logw,x_0,...,x_{n-1}
class SampleDump {
 public:
  explicit SampleDump(const std::string& path) {
    if (path.empty()) return;
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open dump file: " + path);
    out_.precision(17);
  }
  mc::SampleObserver observer() {
    if (!out_.is_open()) return {};
    return [this](std::uint64_t s, std::span<const double> x, double logw) {
      if (!header_) {
        out_ << "sample,logw";
        for (std::size_t i = 0; i < x.size(); ++i) out_ << ",x" << i;
        out_ << '\n';
        header_ = true;
      }
      out_ << s << ',' << logw;
      for (double v : x) out_ << ',' << v;
      out_ << '\n';
    };
  }

 private:
  std::ofstream out_;
  bool header_ = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz polytope volumes, growth constants and q-series checks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph and print it as an edge list");
  std::string gen_spec;
  std::size_t gen_n = 0;
  double gen_d = 0.0;
  std::string gen_out;
  SeedOption gen_seed;
  gen->add_option("--graph", gen_spec, "Graph spec (builtin:..., circ:M,h or a file)");
  gen->add_option("--n", gen_n, "Vertices of G(n, d/n)");
  gen->add_option("--d", gen_d, "Average degree of G(n, d/n)");
  gen->add_option("--out", gen_out, "Output file (default stdout)");
  add_seed(gen, gen_seed);
  gen->callback([&] {
    Graph g = gen_spec.empty() ? gen_gnp(gen_n, gen_d, gen_seed.resolve()) : resolve_graph_spec(gen_spec);
    if (gen_out.empty()) {
      write_edge_list(std::cout, g);
    } else {
      std::ofstream out(gen_out);
      if (!out) throw std::runtime_error("cannot write " + gen_out);
      write_edge_list(out, g);
    }
  });

  // exact-c
  auto* exc = app.add_subcommand("exact-c", "Exact Ehrhart leading coefficient and c(G)");
  std::string exc_spec;
  std::uint64_t exc_budget = exact::kDefaultWorkBudget;
  SeedOption exc_seed;
  exc->add_option("--graph", exc_spec, "Graph spec")->required();
  exc->add_option("--budget", exc_budget, "DP node-expansion budget");
  add_seed(exc, exc_seed);
  exc->callback([&] {
    exact::CountOptions opts;
    opts.work_budget = exc_budget;
    const auto r = exact::ehrhart_c(resolve_graph_spec(exc_spec), opts);
    json counts = json::array();
    for (const auto& c : r.counts) counts.push_back(to_decimal_string(c));
    print({{"counts", counts},
           {"D", r.D},
           {"leading", to_fraction_string(r.leading)},
           {"volume", r.volume},
           {"c", r.c}});
  });

  // hom
  auto* hom = app.add_subcommand("hom", "Count homomorphisms into a circular target");
  std::string hom_spec, hom_target;
  std::uint64_t hom_budget = exact::kDefaultWorkBudget;
  std::optional<unsigned> hom_lift_h, hom_lift_L;
  SeedOption hom_seed;
  hom->add_option("--graph", hom_spec, "Source graph spec")->required();
  hom->add_option("--target", hom_target, "Target spec, e.g. circ:10,2");
  hom->add_option("--lift-h", hom_lift_h, "Run the lifting check with this h");
  hom->add_option("--lift-L", hom_lift_L, "Lifting check multiplier L (M = L h)");
  hom->add_option("--budget", hom_budget, "DP node-expansion budget");
  add_seed(hom, hom_seed);
  hom->callback([&] {
    exact::CountOptions opts;
    opts.work_budget = hom_budget;
    const Graph g = resolve_graph_spec(hom_spec);
    json out;
    if (!hom_target.empty()) {
      const auto r = exact::count_hom(g, resolve_graph_spec(hom_target), opts);
      out["count"] = to_decimal_string(r.count);
      out["target_M"] = r.target_M;
    }
    if (hom_lift_h) {
      const auto rep = exact::lifting_check(g, *hom_lift_h, hom_lift_L.value_or(5), opts);
      out["lifting"] = {{"hom", to_decimal_string(rep.hom)},
                        {"M_times_N", to_decimal_string(rep.M_times_N)},
                        {"M", rep.M},
                        {"pass", rep.pass}};
      if (!rep.pass) exit_code = kExitAssertion;
    }
    if (out.is_null()) throw std::invalid_argument("hom: give --target and/or --lift-h");
    print(out);
  });

  // mc
  auto* mcc = app.add_subcommand("mc", "Monte Carlo volume estimates");
  std::string mc_spec, mc_op = "sis", mc_dump;
  std::uint64_t mc_samples = 100000;
  double mc_d = 20.0;
  std::optional<double> mc_T;
  std::size_t mc_n = 2000;
  std::optional<double> mc_graph_d;
  SeedOption mc_seed;
  mcc->add_option("--graph", mc_spec, "Graph spec (sis, smc, slice, flatness)");
  mcc->add_option("--op", mc_op, "Operation")
      ->check(CLI::IsMember({"sis", "smc", "slice", "annealed", "flatness"}));
  mcc->add_option("--samples", mc_samples, "Number of samples (particles for smc)");
  mcc->add_option("--d", mc_d, "Profile parameter d");
  mcc->add_option("--T", mc_T, "Window padding T (default log d)");
  mcc->add_option("--n", mc_n, "Vertices for the annealed mean");
  mcc->add_option("--graph-d", mc_graph_d, "Average degree for the annealed mean (default --d)");
  mcc->add_option("--dump", mc_dump, "CSV dump of every sample");
  add_seed(mcc, mc_seed);
  mcc->callback([&] {
    const std::uint64_t seed = mc_seed.resolve();
    SampleDump dump(mc_dump);
    if (mc_op == "annealed") {
      const auto p = make_params(mc_d, mc_T);
      const auto r = mc::annealed_slice_mean(mc_n, mc_graph_d.value_or(mc_d), p, mc_samples, seed);
      const bool pass = r.log_mean_over_n >= r.profile_prediction - 3.0 * r.stderr_log;
      print({{"log_mean_over_n", r.log_mean_over_n},
             {"stderr_log", r.stderr_log},
             {"profile_prediction", r.profile_prediction},
             {"H", r.H},
             {"Q", r.Q},
             {"mean_bad_pairs", r.mean_bad_pairs},
             {"samples", r.samples},
             {"analytic", r.analytic},
             {"lower_bound_pass", pass},
             {"seed", seed}});
      if (!pass) exit_code = kExitAssertion;
      return;
    }
    if (mc_spec.empty()) throw std::invalid_argument("mc: --graph is required for --op " + mc_op);
    const Graph g = resolve_graph_spec(mc_spec);
    if (mc_op == "sis") {
      print(estimate_json(mc::sis_volume(g, mc_samples, seed, dump.observer())));
    } else if (mc_op == "smc") {
      print(estimate_json(mc::smc_log_volume(g, mc_samples, seed)));
    } else if (mc_op == "slice") {
      const auto p = make_params(mc_d, mc_T);
      print(estimate_json(mc::quenched_slice_volume(g, p, mc_samples, seed, dump.observer())));
    } else {
      const auto p = make_params(mc_d, mc_T);
      const auto s = mc::lipschitz_sampler_flatness_survey(g, p, mc_samples, seed);
      // Census of the first accepted SIS sample on the largest component.
      json census = nullptr;
      const auto giant = largest_component(g);
      if (giant.size() >= 2) {
        const Graph sub = induced_subgraph(g, giant);
        mc::sis_log_volume(sub, std::min<std::uint64_t>(mc_samples, 1000), seed,
                           [&](std::uint64_t, std::span<const double> x, double lw) {
                             if (!census.is_null() || !std::isfinite(lw)) return;
                             const auto a = mc::flatness_anchor(x);
                             census = census_json(mc::tail_census(x, a.anchor_index));
                             census["anchor_index"] = giant[a.anchor_index];
                             census["outside_count"] = a.outside_count;
                           });
      }
      print({{"n", s.n},
             {"census", census},
             {"quenched", survey_json(s.quenched)},
             {"sis", survey_json(s.sis)},
             {"sis_vertices", s.sis_vertices},
             {"seed", seed}});
    }
  });

  // profile
  auto* prof = app.add_subcommand("profile", "Logistic profile constants");
  double pr_d = 100.0;
  std::optional<double> pr_T;
  std::string pr_check = "gain", pr_mode = "untruncated";
  std::size_t pr_neighbors = 0;
  std::uint64_t pr_replicas = 10000;
  SeedOption pr_seed;
  prof->add_option("--d", pr_d, "Profile parameter d");
  prof->add_option("--T", pr_T, "Window padding T (default log d)");
  prof->add_option("--check", pr_check, "Quantity")
      ->check(CLI::IsMember({"norm", "entropy", "badpair", "gain", "extremes"}));
  prof->add_option("--mode", pr_mode, "Density mode")
      ->check(CLI::IsMember({"untruncated", "truncated"}));
  prof->add_option("--neighbors", pr_neighbors, "Neighbours per replica for extremes (default d)");
  prof->add_option("--replicas", pr_replicas, "Replicas for extremes");
  add_seed(prof, pr_seed);
  prof->callback([&] {
    const auto p = make_params(pr_d, pr_T);
    const auto mode = pr_mode == "truncated" ? profile::Mode::Truncated : profile::Mode::Untruncated;
    json out{{"d", p.d}, {"T", p.T}, {"mode", pr_mode}, {"padding_warning", p.padding_warning()}};
    if (pr_check == "norm") {
      out["norm_defect"] = profile::norm_defect(p, mode);
    } else if (pr_check == "entropy") {
      const double H = profile::entropy_H(p, mode);
      out["H"] = H;
      out["d_H"] = p.d * H;
      out["pi2_over_3"] = 2.0 * kZeta2;
    } else if (pr_check == "badpair") {
      const double Q = profile::bad_pair_Q(p, mode);
      out["Q"] = Q;
      out["d2_Q"] = p.d * p.d * Q;
      out["pi2_over_3"] = 2.0 * kZeta2;
    } else if (pr_check == "gain") {
      const auto s = profile::profile_gain(p, mode);
      out["H"] = s.H;
      out["Q"] = s.Q;
      out["gain"] = s.gain;
      out["d_gain"] = p.d * s.gain;
      out["pi2_over_6"] = kZeta2;
      out["norm_defect"] = s.norm_defect;
    } else {
      const std::size_t k = pr_neighbors ? pr_neighbors : static_cast<std::size_t>(std::lround(p.d));
      const auto r = profile::neighbor_extremes(p, k, pr_replicas, pr_seed.resolve());
      out["d_neighbors"] = r.d_neighbors;
      out["replicas"] = r.replicas;
      out["mean_R"] = r.mean_R;
      out["stderr_R"] = r.stderr_R;
      out["mean_R2"] = r.mean_R2;
      out["stderr_R2"] = r.stderr_R2;
      out["mean_log1pR"] = r.mean_log1pR;
      out["stderr_log1pR"] = r.stderr_log1pR;
      out["frac_scaled_max_nonpositive"] = r.frac_scaled_max_nonpositive;
      out["stderr_frac"] = r.stderr_frac;
    }
    print(out);
  });

  // qseries
  auto* qs = app.add_subcommand("qseries", "q-series identities and bounds");
  std::string qs_q = "1/2", qs_check = "identity";
  unsigned qs_N = 4, qs_r = 2, qs_s = 0;
  unsigned long qs_R = 2;
  std::uint64_t qs_samples = 100000;
  SeedOption qs_seed;
  qs->add_option("--q", qs_q, "q as a rational a/b or a decimal");
  qs->add_option("--N", qs_N, "N");
  qs->add_option("--r", qs_r, "r");
  qs->add_option("--s", qs_s, "s (correlation check)");
  qs->add_option("--R", qs_R, "R (two-tail sum)");
  qs->add_option("--samples", qs_samples, "Samples for the correlation check");
  qs->add_option("--check", qs_check, "Check")
      ->check(CLI::IsMember({"identity", "rowsum", "twotail", "zeta", "pochhammer", "correlation"}));
  add_seed(qs, qs_seed);
  qs->callback([&] {
    json out{{"check", qs_check}};
    bool pass = true;
    if (qs_check == "identity") {
      const auto q = parse_rational(qs_q);
      const auto a = qseries::one_tail_A(qs_N, qs_r, q);
      const auto b = qseries::one_tail_A_bruteforce(qs_N, qs_r, q);
      pass = a == b;
      out["one_tail_A"] = to_fraction_string(a);
      out["bruteforce"] = to_fraction_string(b);
    } else if (qs_check == "zeta") {
      const auto z = qseries::zeta_integral();
      pass = std::abs(z.value - kZeta2) <= 1e-10;
      out["value"] = z.value;
      out["err"] = z.err;
      out["pi2_over_6"] = kZeta2;
    } else {
      const double q = to_double(parse_rational(qs_q));
      if (qs_check == "rowsum") {
        const auto direct = qseries::row_sum_direct(q, qs_r);
        const auto closed = qseries::inv_z_pochhammer_inf(std::pow(q, qs_r), q);
        pass = std::abs(direct.value - closed.value) <= 1e-10 * std::abs(closed.value);
        out["direct"] = direct.value;
        out["closed_form"] = closed.value;
      } else if (qs_check == "twotail") {
        const double s = qseries::two_tail_sum(q, qs_R);
        const double bound = qseries::two_tail_bound(q, qs_R);
        pass = s <= bound;
        out["sum"] = s;
        out["bound"] = bound;
      } else if (qs_check == "pochhammer") {
        const auto v = qseries::log_q_pochhammer_inf(q);
        out["log_q_pochhammer_inf"] = v.value;
        out["err"] = v.err;
      } else {
        const auto r = qseries::monotone_correlation_check(qs_N, qs_r, qs_s, parse_rational(qs_q), qs_samples,
                                                           qs_seed.resolve());
        pass = r.pass;
        out["lhs_estimate"] = r.lhs_estimate;
        out["stderr"] = r.stderr;
        out["rhs"] = r.rhs;
        out["rhs_exact"] = to_fraction_string(r.rhs_exact);
        out["exact"] = r.exact;
      }
    }
    out["pass"] = pass;
    print(out);
    if (!pass) exit_code = kExitAssertion;
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a configured experiment and write reports");
  std::string ex_config, ex_out;
  std::vector<std::string> ex_set;
  SeedOption ex_seed;
  exp->add_option("--config", ex_config, "Flat key=value config file");
  exp->add_option("--set", ex_set, "Override key=value (repeatable)");
  exp->add_option("--out", ex_out, "Report base path (overrides output_path)");
  add_seed(exp, ex_seed);
  exp->callback([&] {
    experiments::ExperimentConfig cfg;
    if (!ex_config.empty()) cfg = experiments::load_config(ex_config);
    for (const auto& s : ex_set) experiments::apply_override(cfg, s);
    if (ex_seed.flag || std::getenv("LIPVOL_SEED")) cfg.seed = ex_seed.resolve();
    if (!ex_out.empty()) cfg.output_path = ex_out;
    const auto rec = experiments::run_experiment(cfg);
    json summary{{"checks", json::array()}, {"all_pass", rec.all_pass()}, {"wall_time", rec.wall_time}};
    for (const auto& c : rec.checks) {
      summary["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    if (!cfg.output_path.empty()) {
      summary["files"] = experiments::emit_report(rec, cfg.output_path);
      print(summary);
    } else {
      print(experiments::to_json(rec));
    }
    if (!rec.all_pass()) exit_code = kExitAssertion;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const exact::ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return exit_code;
}

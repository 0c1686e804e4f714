// Copyright 2026 The rabicat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// rabicat: command-line driver. Every subcommand writes a CSV table and a
// <table>.meta.json sidecar with the full parameters of the run.

#include "rabicat/analysis.hpp"
#include "rabicat/config.hpp"
#include "rabicat/effective_model.hpp"
#include "rabicat/interferometer.hpp"
#include "rabicat/observables.hpp"
#include "rabicat/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>


#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rabicat;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out;
  int jobs = 0;
  std::map<std::string, CLI::Option*> model_flags;
  std::map<std::string, std::string> values;
};

void add_common(CLI::App* app, CommonFlags& f, const std::string& default_out) {
  f.out = default_out;
  app->add_option("--config", f.config_path, "configuration file (key = value)");
  app->add_option("--out", f.out, "output CSV path")->capture_default_str();
  app->add_option("--jobs", f.jobs, "worker threads for sweeps (0 = all cores)");
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"R", "size parameter omega_0 / omega"}, {"lambda", "coupling strength"},
      {"delta", "rotating / counter-rotating mixing"}, {"mu", "parity-breaking strength"},
      {"gamma", "oscillator damping"},           {"tmax", "final time"},
      {"dt", "sampling step"},                    {"nmax", "Fock cutoff (0: 4R)"}};
  for (const auto& [key, help] : keys) f.model_flags[key] = app->add_option("--" + key, f.values[key], help);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> overrides(const CommonFlags& f) {
  std::map<std::string, std::string> out;
  for (const auto& [key, opt] : f.model_flags)
    if (opt->count() > 0) out[key] = f.values.at(key);
  return out;
}

RunConfig load(const CommonFlags& f, bool need_R = true) {
  const std::string text = f.config_path.empty() ? std::string() : read_file(f.config_path);
  auto ov = overrides(f);
  if (!need_R && !ov.count("R")) {
    try {
      return parse_config(text, ov);
    } catch (const ConfigError& e) {
      if (e.field() != "R") throw;
      ov["R"] = "100";
    }
  }
  return parse_config(text, ov);
}

RunSpec spec_for(const RunConfig& c) {
  RunSpec spec;
  spec.fock = c.fock;
  spec.plan = c.plan;
  return spec;
}

json params_json(const ModelParams& p) {
  return {{"R", p.R}, {"lambda", p.lambda}, {"delta", p.delta}, {"mu", p.mu}, {"gamma", p.gamma}};
}

json base_meta(const std::string& command, const RunConfig& c, const CsvTable& table) {
  const FockConfig fock = c.resolved_fock();
  return {{"tool", "rabicat"},
          {"version", kVersion},
          {"command", command},
          {"params", params_json(c.model)},
          {"fock", {{"n_max", fock.n_max}, {"tail_tol", fock.tail_tol}}},
          {"plan",
           {{"method", to_string(c.plan.method)},
            {"dt", c.plan.dt},
            {"t_max", c.plan.t_max},
            {"krylov_dim", c.plan.krylov_dim},
            {"step_tol", c.plan.step_tol}}},
          {"config", to_text(c)},
          {"columns", table.columns()}};
}

void emit(const CsvTable& table, const std::string& out, json meta) {
  table.write(out);
  write_metadata(out, meta);
  std::cout << "wrote " << out << " (" << table.rows() << " rows)\n";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    out.push_back(v);
  }
  return out;
}

std::string sibling(const std::string& out, const std::string& suffix) {
  const fs::path p(out);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

// ---------------------------------------------------------------------------

int run_evolve(const CommonFlags& f) {
  const RunConfig c = load(f);
  RunSpec spec = spec_for(c);
  const bool want_left = std::find(c.outputs.begin(), c.outputs.end(), "left_weight") != c.outputs.end();
  spec.left_weight_stride = want_left ? 1 : 0;
  const Trajectory tr = run_trajectory(c.model, spec);
  std::vector<std::string> cols = {"t"};
  cols.insert(cols.end(), c.outputs.begin(), c.outputs.end());
  CsvTable table(cols);
  const std::map<std::string, const TimeSeries*> series = {
      {"avg_x", &tr.avg_x},     {"avg_p", &tr.avg_p},     {"sigma_x", &tr.sigma_x},
      {"sigma_y", &tr.sigma_y}, {"sigma_z", &tr.sigma_z}, {"parity", &tr.parity},
      {"overlap", &tr.overlap}, {"purity", &tr.purity},   {"left_weight", &tr.left_weight}};
  for (std::size_t i = 0; i < tr.avg_x.size(); ++i) {
    std::vector<double> row = {tr.avg_x.times[i]};
    for (const auto& name : c.outputs) row.push_back(series.at(name)->values[i]);
    table.add_row(row);
  }
  json meta = base_meta("evolve", c, table);
  meta["method"] = tr.dissipative ? to_string(spec.lindblad.method) : to_string(tr.method);
  meta["max_tail_weight"] = tr.max_tail_weight;
  emit(table, f.out, meta);
  return 0;
}

int run_wigner(const CommonFlags& f, const std::string& times_text, int grid, double extent) {
  const RunConfig c = load(f);
  if (c.model.gamma > 0.0) throw std::invalid_argument("wigner snapshots are computed on the unitary path (gamma = 0)");
  const std::vector<double> times = parse_list(times_text);
  RunConfig run = c;
  run.plan.t_max = std::max(run.plan.dt, *std::max_element(times.begin(), times.end()));
  const auto snaps = unitary_snapshots(c.model, spec_for(run), times);
  PhaseSpaceGridSpec gs;
  gs.nx = gs.np = grid;
  gs.x_min = gs.p_min = -extent;
  gs.x_max = gs.p_max = extent;
  const bool several = snaps.size() > 1;
  CsvTable table(several ? std::vector<std::string>{"t", "x", "p", "W"} : std::vector<std::string>{"x", "p", "W"});
  json norms = json::array();
  for (const auto& [t, psi] : snaps) {
    const PhaseSpaceGrid g = wigner(reduce_oscillator(psi), gs, c.model);
    for (int i = 0; i < gs.nx; ++i)
      for (int j = 0; j < gs.np; ++j) {
        if (several)
          table.add_row(std::vector<double>{t, g.x_axis[i], g.p_axis[j], g.w(i, j)});
        else
          table.add_row(std::vector<double>{g.x_axis[i], g.p_axis[j], g.w(i, j)});
      }
    norms.push_back({{"t", t}, {"normalization", g.normalization()}, {"min_W", g.min_value()}});
  }
  json meta = base_meta("wigner", run, table);
  meta["grid"] = {{"n", grid}, {"extent", extent}};
  meta["snapshots"] = norms;
  emit(table, f.out, meta);
  return 0;
}

CsvTable collapse_table(const SweepResult& r) {
  CsvTable t({r.parameter, "status", "t_merge", "t_min", "depth", "extreme_slope", "left_weight", "exit_channel"});
  for (const auto& pt : r.points) {
    if (!pt.ok) {
      t.add_row(std::vector<std::string>{format_number(pt.value), "error", "", "", "", "", "", "none"});
      continue;
    }
    const CollapseReport& c = pt.report;
    t.add_row(std::vector<std::string>{format_number(pt.value), c.found ? "ok" : "no_merge", format_number(c.t_merge),
                                       format_number(c.t_min), format_number(c.depth), format_number(c.extreme_slope),
                                       format_number(c.left_weight), to_string(c.exit_channel)});
  }
  return t;
}

json sweep_errors(const SweepResult& r) {
  json e = json::array();
  for (const auto& pt : r.points)
    if (!pt.ok) e.push_back({{"value", pt.value}, {"error", pt.error}});
  return e;
}

int run_sweep_mu(const CommonFlags& f, double lo, double hi, int count, int stride) {
  const RunConfig c = load(f);
  RunSpec spec = spec_for(c);
  spec.left_weight_stride = stride;
  const auto grid = log_spaced(lo, hi, count);
  const SweepResult r = sweep_mu(c.model, grid, spec, f.jobs);
  CsvTable map({"mu", "t", "avg_x"});
  for (const auto& pt : r.points)
    if (pt.ok)
      for (std::size_t i = 0; i < pt.avg_x.size(); ++i) map.add_row(std::vector<double>{pt.value, r.times[i], pt.avg_x[i]});
  json meta = base_meta("sweep-mu", c, map);
  meta["mu_grid"] = grid;
  meta["errors"] = sweep_errors(r);
  emit(map, f.out, meta);
  const CsvTable exits = collapse_table(r);
  const std::string path = sibling(f.out, "_exits");
  json em = base_meta("sweep-mu", c, exits);
  em["mu_grid"] = grid;
  emit(exits, path, em);
  int failures = 0;
  for (const auto& pt : r.points) failures += pt.ok ? 0 : 1;
  return failures == static_cast<int>(r.points.size()) ? 1 : 0;
}

int run_sweep_gamma(const CommonFlags& f, const std::string& gammas, int stride) {
  const RunConfig c = load(f);
  RunSpec spec = spec_for(c);
  spec.left_weight_stride = stride;
  const auto grid = parse_list(gammas);
  const SweepResult r = sweep_gamma(c.model, grid, spec, f.jobs);
  const CsvTable table = collapse_table(r);
  json meta = base_meta("sweep-gamma", c, table);
  meta["gamma_grid"] = grid;
  meta["errors"] = sweep_errors(r);
  emit(table, f.out, meta);
  CsvTable series({"gamma", "t", "avg_x"});
  for (const auto& pt : r.points)
    if (pt.ok)
      for (std::size_t i = 0; i < pt.avg_x.size(); ++i) series.add_row(std::vector<double>{pt.value, r.times[i], pt.avg_x[i]});
  emit(series, sibling(f.out, "_series"), base_meta("sweep-gamma", c, series));
  for (const auto& pt : r.points)
    if (!pt.ok) return 1;
  return 0;
}

int run_scaling_cmd(const CommonFlags& f, const std::string& sizes_text, double mu_times_R, double levels_per_R) {
  RunConfig c = load(f, false);
  RunSpec spec = spec_for(c);
  spec.fock.n_max = 0;
  spec.levels_per_R = levels_per_R;
  spec.left_weight_stride = 0;
  const auto sizes = parse_list(sizes_text);
  const ScalingStudy st = run_scaling(c.model, sizes, mu_times_R, spec, std::max(1, f.jobs));

  CsvTable table({"R", "mu", "n_max", "t_min", "s", "s_predicted", "slope", "slope_rescaled"});
  for (const auto& pt : st.points)
    table.add_row(std::vector<double>{pt.R, pt.mu, double(pt.n_max), pt.t_min, pt.s, pt.s_predicted, pt.slope,
                                      pt.slope_rescaled});
  json meta = base_meta("scaling", c, table);
  meta["sizes"] = sizes;
  meta["mu_times_R"] = mu_times_R;
  meta["levels_per_R"] = levels_per_R;
  meta["lambda_abs"] = st.law.lambda_abs;
  meta["tau"] = st.law.tau;
  meta["v0"] = st.v0;
  json methods = json::array();
  for (const auto& pt : st.points) methods.push_back(to_string(pt.method));
  meta["methods"] = methods;
  if (st.points.size() >= 3) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& pt : st.points) pts.emplace_back(pt.R, pt.slope_rescaled);
    const LinearFit fit = fit_slope_vs_logR(pts);
    meta["slope_fit"] = {{"a", fit.a}, {"b", fit.b}};
  }
  emit(table, f.out, meta);

  CsvTable series({"R", "t", "avg_x", "t_rescaled"});
  for (const auto& pt : st.points)
    for (std::size_t i = 0; i < pt.avg_x.size(); ++i)
      series.add_row(std::vector<double>{pt.R, pt.avg_x.times[i], pt.avg_x.values[i], pt.avg_x.times[i] / pt.s});
  emit(series, sibling(f.out, "_series"), base_meta("scaling", c, series));
  return 0;
}

int run_effective(const CommonFlags& f, double R_prime, double tau) {
  const RunConfig c = load(f, false);
  const StationaryPointReport r = classify_origin(c.model);
  CsvTable table({"quantity", "value"});
  auto row = [&](const std::string& k, double v) { table.add_row(std::vector<std::string>{k, format_number(v)}); };
  table.add_row(std::vector<std::string>{"kind", to_string(r.kind)});
  row("lambda_lower", r.lambda_lower);
  row("lambda_upper", r.lambda_upper);
  row("eigenvalue_1_re", r.eigenvalues[0].real());
  row("eigenvalue_1_im", r.eigenvalues[0].imag());
  row("eigenvalue_2_re", r.eigenvalues[1].real());
  row("eigenvalue_2_im", r.eigenvalues[1].imag());
  row("lambda_abs", lambda_abs(c.model));
  table.add_row(std::vector<std::string>{"stable", r.stable ? "true" : "false"});
  row("origin_gradient", r.origin_gradient);
  const Eigen::Matrix2d m = linearized_matrix(c.model);
  row("linearized_00", m(0, 0));
  row("linearized_01", m(0, 1));
  row("linearized_10", m(1, 0));
  row("linearized_11", m(1, 1));
  const double L = lambda_abs(c.model);
  if (R_prime > 0.0 && L > 0.0) {
    row("expansion_delay", expansion_delay(c.model.R, R_prime, L));
    if (tau > 0.0) {
      const ScalingLaw law{L, tau};
      row("scaling_coefficient", law.coefficient());
      row("scaling_constant", scaling_constant(law, c.model.R, R_prime));
    }
  }
  json meta = base_meta("effective", c, table);
  meta["R_prime"] = R_prime;
  meta["tau"] = tau;
  emit(table, f.out, meta);
  return 0;
}

int run_interferometer(const std::string& out, int n_max, double dphi) {
  CsvTable table({"n_dphi", "P_left", "P_right"});
  for (int n = 0; n <= n_max; ++n) {
    const ExitAmplitudes a = exit_amplitudes({n, dphi});
    table.add_row(std::vector<double>{n * dphi, a.left * a.left, a.right * a.right});
  }
  json meta = {{"tool", "rabicat"},           {"version", kVersion}, {"command", "interferometer"},
               {"n_cycles_max", n_max},       {"dphi", dphi},       {"columns", table.columns()}};
  emit(table, out, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rabicat: parity-breaking collapse in the extended Rabi model"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonFlags evolve_f, wigner_f, mu_f, gamma_f, scaling_f, effective_f;

  auto* evolve = app.add_subcommand("evolve", "time series of the standard observables");
  add_common(evolve, evolve_f, "evolve.csv");

  auto* wig = app.add_subcommand("wigner", "Wigner function snapshots on a square grid");
  add_common(wig, wigner_f, "wigner.csv");
  std::string wig_times = "7.5";
  int wig_grid = 256;
  double wig_extent = 2.0;
  wig->add_option("--time", wig_times, "snapshot time(s), comma separated")->capture_default_str();
  wig->add_option("--grid", wig_grid, "points per axis")->capture_default_str();
  wig->add_option("--extent", wig_extent, "half-width of the grid in x and p")->capture_default_str();

  auto* smu = app.add_subcommand("sweep-mu", "<x(t)> map and exit channels over a log-spaced mu grid");
  add_common(smu, mu_f, "sweep_mu.csv");
  double mu_lo = 1e-4, mu_hi = 0.2;
  int mu_count = 60, mu_stride = 10;
  smu->add_option("--mu-min", mu_lo)->capture_default_str();
  smu->add_option("--mu-max", mu_hi)->capture_default_str();
  smu->add_option("--count", mu_count)->capture_default_str();
  smu->add_option("--left-stride", mu_stride, "samples between left-well evaluations")->capture_default_str();

  auto* sg = app.add_subcommand("sweep-gamma", "collapse depth versus damping");
  add_common(sg, gamma_f, "sweep_gamma.csv");
  std::string gammas = "0,0.01,0.03,0.05,0.1";
  int gamma_stride = 10;
  sg->add_option("--gammas", gammas, "comma separated damping values")->capture_default_str();
  sg->add_option("--left-stride", gamma_stride)->capture_default_str();

  auto* sc = app.add_subcommand("scaling", "size series with mu = c / R and the measured time dilation");
  add_common(sc, scaling_f, "scaling.csv");
  std::string sizes = "100,1000";
  double mu_R = 0.13, levels_per_R = 4.0;
  sc->add_option("--sizes", sizes, "comma separated sizes; the first is the reference")->capture_default_str();
  sc->add_option("--mu-R", mu_R, "mu times R")->capture_default_str();
  sc->add_option("--levels-per-R", levels_per_R, "Fock levels per unit R")->capture_default_str();

  auto* eff = app.add_subcommand("effective", "stationary point, stability and scaling analytics");
  add_common(eff, effective_f, "effective.csv");
  double r_prime = 0.0, tau = 0.0;
  eff->add_option("--R-prime", r_prime, "larger size for the expansion delay");
  eff->add_option("--tau", tau, "first-minimum time at R");

  auto* itf = app.add_subcommand("interferometer", "exit probabilities of the loop interferometer");
  std::string itf_out = "interferometer.csv";
  int n_cycles = 64;
  double dphi = 0.0490873852123405;  // pi / 64
  itf->add_option("--out", itf_out)->capture_default_str();
  itf->add_option("--cycles", n_cycles)->capture_default_str();
  itf->add_option("--dphi", dphi)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*evolve) return run_evolve(evolve_f);
    if (*wig) return run_wigner(wigner_f, wig_times, wig_grid, wig_extent);
    if (*smu) return run_sweep_mu(mu_f, mu_lo, mu_hi, mu_count, mu_stride);
    if (*sg) return run_sweep_gamma(gamma_f, gammas, gamma_stride);
    if (*sc) return run_scaling_cmd(scaling_f, sizes, mu_R, levels_per_R);
    if (*eff) return run_effective(effective_f, r_prime, tau);
    if (*itf) return run_interferometer(itf_out, n_cycles, dphi);
  } catch (const std::exception& e) {
    std::cerr << "rabicat: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

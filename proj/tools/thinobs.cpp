// Command-line front end: epi-check, decompose, solve, frequency, weiss,
// blowup, regularity, gap-scan, list-presets.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "thinobs/diagnostics.hpp"
#include "thinobs/epi.hpp"
#include "thinobs/gapscan.hpp"
#include "thinobs/presets.hpp"

#ifndef THINOBS_VERSION
#define THINOBS_VERSION "dev"
#endif

using namespace thinobs;
namespace fs = std::filesystem;

namespace {

struct Config {
  std::string config_file;
  std::string out = ".";
  bool sequential = false;
  int n = 1;
  std::string h = "1/256";
  double tol = 1e-10;
  long max_sweeps = 200000;
  double omega = 0.0;
  std::string order = "lex";
  std::string preset = "he";
  std::string trace;
  std::string grid;
  std::uint64_t seed = 0;
  int cases = 200;
  bool symmetrize = false;
  std::vector<double> radii;
  std::vector<double> centers;
  double lambda = 1.5;
  double exponent = 0.5;
  std::string h_out = "1/128";
  double lo = 1.01, hi = 1.49, step = 1e-4;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_spacing(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

// Flat key=value file; keys are long option names without dashes. Options
// already given on the command line keep their values.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") opt->add_result(std::string("true"));
    } else {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) opt->add_result(trim(item));
    }
    opt->run_callback();
  }
}

PresetArgs preset_args(const Config& c) { return {c.seed, c.trace}; }

SolveOptions solve_options(const Config& c) {
  SolveOptions o;
  o.h = parse_spacing(c.h);
  o.tol = c.tol;
  o.max_sweeps = c.max_sweeps;
  o.omega = c.omega;
  if (c.order == "lex") o.order = SweepOrder::lexicographic;
  else if (c.order == "red-black") o.order = SweepOrder::red_black;
  else throw std::invalid_argument("order must be 'lex' or 'red-black'");
  if (c.sequential) o.order = SweepOrder::lexicographic;
  return o;
}

GridSolution obtain_grid(const Config& c) {
  if (!c.grid.empty()) return read_grid(c.grid);
  const std::string preset = c.preset == "file" && c.trace.empty() ? "he" : c.preset;
  return solve(boundary_preset(preset, preset_args(c)), solve_options(c));
}

std::vector<double> centers_for(const Config& c, const GridSolution& s) {
  if (!c.centers.empty()) return c.centers;
  std::vector<double> out;
  for (double p : free_boundary(s))
    if (std::abs(p) <= 0.5) out.push_back(p);
  if (out.empty()) out.push_back(0.0);
  return out;
}

std::string grid_summary(const GridSolution& s) {
  const Residuals r = residuals(s);
  std::ostringstream out;
  out << "h " << fmt(s.h()) << "\n"
      << "sweeps " << s.sweeps << "\n"
      << "converged " << (s.converged ? "true" : "false") << "\n"
      << "residual " << fmt(s.residual) << "\n"
      << "harmonic_res " << fmt(r.harmonic) << "\n"
      << "complementarity_res " << fmt(r.complementarity) << "\n"
      << "sign_res " << fmt(r.sign) << "\n"
      << "min_equator " << fmt(r.min_equator) << "\n"
      << "energy " << fmt(dirichlet_energy(s)) << "\n";
  out << "free_boundary";
  for (double p : free_boundary(s)) out << " " << fmt(p);
  out << "\n";
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int run_epi_check(const Config& c, const fs::path& out) {
  std::vector<EpiReport> reports;
  if (c.preset == "random-trace") {
    reports = check_random(c.n, c.cases, c.seed, c.sequential);
  } else {
    const BasisPtr basis = EigenBasis::build(c.n, default_cutoff);
    reports.push_back(check(trace_preset(c.preset, basis, preset_args(c)), std::nullopt, c.symmetrize));
  }
  std::vector<double> idx, wz, wzeta, I, J, K, L, res, pass;
  int failed = 0;
  double worst_ledger = 0.0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const EpiReport& r = reports[k];
    idx.push_back(static_cast<double>(k));
    wz.push_back(r.W_z);
    wzeta.push_back(r.W_zeta);
    I.push_back(r.I);
    J.push_back(r.J);
    K.push_back(r.K);
    L.push_back(r.L);
    res.push_back(r.ledger_residual());
    pass.push_back(r.passed ? 1.0 : 0.0);
    failed += r.passed ? 0 : 1;
    worst_ledger = std::max(worst_ledger, std::abs(r.ledger_residual()));
  }
  write_csv(out / "epi_cases.csv", {"case", "W_z", "W_zeta", "I", "J", "K", "L", "ledger_residual", "passed"},
            {idx, wz, wzeta, I, J, K, L, res, pass});
  std::ostringstream text;
  text << "n " << c.n << "\neps " << fmt(default_epsilon(c.n)) << "\ncases " << reports.size() << "\nfailed " << failed
       << "\nmax_ledger_residual " << fmt(worst_ledger) << "\n";
  write_text(out / "epi_report.txt", text.str());
  std::cout << text.str();
  return failed == 0 ? 0 : 1;
}

int run_decompose(const Config& c, const fs::path& out) {
  const BasisPtr basis = EigenBasis::build(c.n, default_cutoff);
  const Trace trace = trace_preset(c.preset, basis, preset_args(c));
  const Decomposition d = decompose(trace, c.symmetrize);
  std::ostringstream text;
  text << "n " << d.n << "\ne " << fmt(d.e[0]) << " " << fmt(d.e[1]) << " " << fmt(d.e[2]) << "\nC " << fmt(d.C)
       << "\nc0 " << fmt(d.c0) << "\nphi_norm " << fmt(std::sqrt(std::max(0.0, sphere_inner(d.phi, d.phi)))) << "\n";
  write_text(out / "decomposition.txt", text.str());
  write_trace(out / "phi.csv", d.phi);
  write_manifest(out / "competitor.txt", competitor(d));
  std::cout << text.str();
  return 0;
}

int run_solve(const Config& c, const fs::path& out) {
  const GridSolution s = obtain_grid(c);
  write_grid(out / "solution.grid", s);
  const std::string text = grid_summary(s);
  write_text(out / "solve_report.txt", text);
  std::cout << text;
  return s.converged ? 0 : 2;
}

std::vector<double> radii_for(const Config& c, const GridSolution& s, double x0) {
  return c.radii.empty() ? default_radii(s, x0) : c.radii;
}

int run_frequency(const Config& c, const fs::path& out) {
  const GridSolution s = obtain_grid(c);
  std::ostringstream text;
  int k = 0;
  for (double x0 : centers_for(c, s)) {
    const FrequencyCurve f = frequency(s, x0, radii_for(c, s, x0));
    write_csv(out / ("frequency_" + std::to_string(k) + ".csv"), {"r", "N", "D", "H"}, {f.radii, f.N, f.D, f.H});
    const HCurve hq = h_quotient(s, x0, c.lambda, f.radii);
    write_csv(out / ("h_quotient_" + std::to_string(k) + ".csv"), {"r", "H_over_r_pow"}, {hq.radii, hq.values});
    text << "center " << k << " x0 " << fmt(x0) << " defect " << fmt(f.defect()) << " h_defect " << fmt(hq.defect());
    try {
      text << " N0 " << fmt(frequency_at_zero(s, x0).value);
    } catch (const std::invalid_argument&) {
      text << " N0 n/a";
    }
    text << "\n";
    ++k;
  }
  write_text(out / "frequency_report.txt", text.str());
  std::cout << text.str();
  return 0;
}

int run_weiss(const Config& c, const fs::path& out) {
  const GridSolution s = obtain_grid(c);
  int k = 0;
  for (double x0 : centers_for(c, s)) {
    const WeissCurve w = weiss_curve(s, x0, c.lambda, radii_for(c, s, x0));
    write_csv(out / ("weiss_" + std::to_string(k++) + ".csv"), {"r", "W"}, {w.radii, w.W});
  }
  std::cout << "wrote " << k << " Weiss curve(s)\n";
  return 0;
}

int run_blowup(const Config& c, const fs::path& out) {
  const GridSolution s = obtain_grid(c);
  const double x0 = centers_for(c, s).front();
  const std::vector<double> radii = c.radii.empty() ? std::vector<double>{0.4, 0.2, 0.1} : c.radii;
  std::vector<GridSolution> blowups;
  std::ostringstream text;
  text << "x0 " << fmt(x0) << "\n";
  for (std::size_t k = 0; k < radii.size(); ++k) {
    blowups.push_back(blowup(s, x0, radii[k], parse_spacing(c.h_out)));
    write_grid(out / ("blowup_" + std::to_string(k) + ".grid"), blowups.back());
    const HeFit fit = he_fit(blowups.back());
    text << "r " << fmt(radii[k]) << " C " << fmt(fit.C) << " e_sign " << fit.e_sign << " residual " << fmt(fit.residual) << "\n";
  }
  for (std::size_t a = 0; a < blowups.size(); ++a)
    for (std::size_t b = a + 1; b < blowups.size(); ++b) {
      double sup = 0.0;
      for (std::size_t k = 0; k < blowups[a].u.size(); ++k) sup = std::max(sup, std::abs(blowups[a].u[k] - blowups[b].u[k]));
      text << "distance " << a << " " << b << " " << fmt(sup) << "\n";
    }
  write_text(out / "blowup_report.txt", text.str());
  std::cout << text.str();
  return 0;
}

int run_regularity(const Config& c, const fs::path& out) {
  const GridSolution s = obtain_grid(c);
  std::ostringstream text;
  const std::vector<double> radii = c.radii.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4} : c.radii;
  for (double x0 : centers_for(c, s)) text << "x0 " << fmt(x0) << " growth_slope " << fmt(growth_slope(s, x0, radii)) << "\n";
  const HolderEstimate e = holder_grad(s, c.exponent);
  text << "holder_exponent " << fmt(c.exponent) << "\nholder_seminorm " << fmt(e.seminorm) << "\nholder_pair " << fmt(e.x[0])
       << " " << fmt(e.x[1]) << " " << fmt(e.y[0]) << " " << fmt(e.y[1]) << "\n";
  write_text(out / "regularity_report.txt", text.str());
  std::cout << text.str();
  return 0;
}

int run_gap_scan(const Config& c, const fs::path& out) {
  const GapCertificate g = certify_gap(c.lo, c.hi, c.step, c.sequential);
  const std::string text = to_text(g);
  write_text(out / "certificate.txt", text);
  std::cout << text;
  return 0;
}

void write_manifest_file(const fs::path& out, const std::string& sub, const CLI::App* app, double seconds) {
  std::ostringstream text;
  text << "subcommand " << sub << "\nversion " << THINOBS_VERSION << "\n";
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
    const auto res = opt->results();
    text << "option " << opt->get_lnames().front() << " =";
    if (res.empty()) text << " " << opt->get_default_str();
    for (const auto& r : res) text << " " << r;
    text << "\n";
  }
  text << "threads " << omp_get_max_threads() << "\nwall_seconds " << fmt(seconds) << "\n";
  write_text(out / "manifest.txt", text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin obstacle problem laboratory"};
  app.set_help_flag("--help", "print help");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Config c;

  auto common = [&c](CLI::App* s) {
    s->add_option("--config", c.config_file, "key=value file; command-line flags win");
    s->add_option("--out", c.out, "output directory");
    s->add_flag("--sequential", c.sequential, "deterministic single-threaded mode");
  };
  auto grid_opts = [&c](CLI::App* s) {
    s->add_option("--preset", c.preset, "boundary data preset");
    s->add_option("--trace", c.trace, "trace file for the file preset");
    s->add_option("--seed", c.seed, "seed for random-trace");
    s->add_option("--grid", c.grid, "read a solved grid instead of solving");
    s->add_option("--h", c.h, "grid spacing, e.g. 1/256");
    s->add_option("--tol", c.tol, "solver tolerance")->check(CLI::PositiveNumber);
    s->add_option("--max-sweeps", c.max_sweeps, "solver sweep limit")->check(CLI::PositiveNumber);
    s->add_option("--omega", c.omega, "relaxation factor (0: near-optimal)");
    s->add_option("--order", c.order, "lex or red-black");
    s->add_option("--x0", c.centers, "centers on the equator")->delimiter(',');
    s->add_option("--radii", c.radii, "radii")->delimiter(',');
  };

  std::map<std::string, int (*)(const Config&, const fs::path&)> handlers;
  auto epi = app.add_subcommand("epi-check", "epiperimetric inequality with the I/J/K/L ledger");
  common(epi);
  epi->add_option("--n", c.n, "sphere dimension (1 or 2)");
  epi->add_option("--seed", c.seed, "random seed");
  epi->add_option("--cases", c.cases, "number of random traces")->check(CLI::PositiveNumber);
  epi->add_option("--preset", c.preset, "trace preset (random-trace draws --cases traces)");
  epi->add_option("--trace", c.trace, "trace file for the file preset");
  epi->add_flag("--symmetrize", c.symmetrize, "drop the odd part instead of rejecting");
  handlers["epi-check"] = run_epi_check;

  auto dec = app.add_subcommand("decompose", "c = C h_e + c0 u0 + phi and the competitor");
  common(dec);
  dec->add_option("--n", c.n, "sphere dimension (1 or 2)");
  dec->add_option("--preset", c.preset, "trace preset");
  dec->add_option("--trace", c.trace, "trace file for the file preset");
  dec->add_option("--seed", c.seed, "seed for random-trace");
  dec->add_flag("--symmetrize", c.symmetrize, "drop the odd part instead of rejecting");
  handlers["decompose"] = run_decompose;

  auto sol = app.add_subcommand("solve", "projected SOR on the half-grid");
  common(sol);
  grid_opts(sol);
  handlers["solve"] = run_solve;

  auto freq = app.add_subcommand("frequency", "Almgren frequency and H quotient curves");
  common(freq);
  grid_opts(freq);
  freq->add_option("--lambda", c.lambda, "homogeneity for the H quotient");
  handlers["frequency"] = run_frequency;

  auto wei = app.add_subcommand("weiss", "Weiss energy curves");
  common(wei);
  grid_opts(wei);
  wei->add_option("--lambda", c.lambda, "homogeneity");
  handlers["weiss"] = run_weiss;

  auto blo = app.add_subcommand("blowup", "normalized blow-ups and the h_e fit");
  common(blo);
  grid_opts(blo);
  blo->add_option("--h-out", c.h_out, "spacing of the blow-up grid");
  handlers["blowup"] = run_blowup;

  auto reg = app.add_subcommand("regularity", "L2 growth slope and gradient Hoelder seminorm");
  common(reg);
  grid_opts(reg);
  reg->add_option("--exponent", c.exponent, "Hoelder exponent");
  handlers["regularity"] = run_regularity;

  auto gap = app.add_subcommand("gap-scan", "enumerate 2D homogeneous solutions and certify the gap");
  common(gap);
  gap->add_option("--lo", c.lo, "lower end of the scan");
  gap->add_option("--hi", c.hi, "upper end of the scan");
  gap->add_option("--step", c.step, "scan step (<= 1e-3)");
  handlers["gap-scan"] = run_gap_scan;

  app.add_subcommand("list-presets", "registered boundary/trace presets");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "list-presets") {
    for (const PresetInfo& p : presets()) std::cout << p.name << "\t" << p.description << "\n";
    return 0;
  }
  try {
    if (!c.config_file.empty()) apply_config(sub, c.config_file);
    if (c.sequential) omp_set_num_threads(1);
    const fs::path out = c.out;
    fs::create_directories(out);
    const auto t0 = std::chrono::steady_clock::now();
    const int status = handlers.at(name)(c, out);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest_file(out, name, sub, seconds);
    return status;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 1;
  }
}

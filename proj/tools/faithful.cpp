// faithful: analyze two-qubit states, scan filter scenarios, and run the
// simulated decohere -> filter -> tomography -> metrics experiment.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "faithful/analytic.hpp"
#include "faithful/channels.hpp"
#include "faithful/corpus.hpp"
#include "faithful/io.hpp"
#include "faithful/metrics.hpp"
#include "faithful/rng.hpp"
#include "faithful/tomography.hpp"

using namespace faithful;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

// Thrown for bad option values that CLI11 cannot check on its own.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string fmt(double x) { return format_double(x); }
std::string fmt(const std::optional<double>& x) { return x ? format_double(*x) : ""; }
const char* fmt(bool b) { return b ? "true" : "false"; }

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  bool is_range = false;
};

SweepRange parse_range(const std::string& text, const std::string& what) {
  const auto colon = text.find(':');
  const auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError(what + ": malformed number '" + s + "'");
    return v;
  };
  if (colon == std::string::npos) return {number(text), number(text), false};
  return {number(text.substr(0, colon)), number(text.substr(colon + 1)), true};
}

Range to_grid(const SweepRange& r, int grid) { return r.is_range ? Range{r.lo, r.hi, grid} : Range::single(r.lo); }

void check_nu_range(const SweepRange& r, const std::string& what) {
  for (double v : {r.lo, r.hi})
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError(what + " must lie in [0, 1]");
}

FilterAxis parse_orientation(const std::string& text) {
  if (text == "x") return FilterAxis::x();
  if (text == "z") return FilterAxis::z();
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw UsageError("orientation: expected x, z or nx,ny,nz");
    }
  }
  if (v.size() != 3) throw UsageError("orientation: expected x, z or nx,ny,nz");
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > 0.0)) throw UsageError("orientation: direction must be non-zero");
  return FilterAxis::along({v[0] / n, v[1] / n, v[2] / n});
}

// θ from either --theta or --c0 (signed cos 2θ).
struct ThetaOptions {
  std::string theta;
  std::string c0;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* c0_opt = nullptr;

  void add(CLI::App& app, const std::string& default_c0) {
    c0 = default_c0;
    theta_opt = app.add_option("--theta", theta, "Rank-2 parameter θ in radians, value or lo:hi");
    c0_opt = app.add_option("--c0", c0, "Signed cos 2θ, value or lo:hi (default " + default_c0 + ")");
    theta_opt->excludes(c0_opt);
  }

  Range grid(int steps) const {
    if (!theta.empty()) {
      const SweepRange r = parse_range(theta, "--theta");
      for (double v : {r.lo, r.hi})
        if (!(v >= 0.0 && v < std::numbers::pi / 2)) throw UsageError("--theta must lie in [0, pi/2)");
      return to_grid(r, steps);
    }
    const SweepRange r = parse_range(c0, "--c0");
    for (double v : {r.lo, r.hi})
      if (!(v > -1.0 && v <= 1.0)) throw UsageError("--c0 must lie in (-1, 1]");
    // Sampled evenly in c; theta_values() converts.
    return to_grid(r, steps);
  }

  bool uses_c0() const { return theta.empty(); }

  std::string describe() const { return uses_c0() ? "c0=" + c0 : "theta=" + theta; }
};

// Values of a grid given in c (cos 2θ) or θ.
std::vector<double> theta_values(const ThetaOptions& t, int steps) {
  const Range g = t.grid(steps);
  std::vector<double> v = g.values();
  if (t.uses_c0())
    for (double& x : v) x = 0.5 * std::acos(x);
  return v;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("FAITHFUL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("FAITHFUL_SEED must be a non-negative integer");
    }
  }
  return 2021;
}

// Output sink: a file when --out is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {}
  std::ostream& stream() { return buffer_; }
  void flush() {
    if (path_.empty()) {
      std::cout << buffer_.str();
      std::cout.flush();
    } else {
      write_text_file(path_, buffer_.str());
    }
  }

 private:
  std::string path_;
  std::ostringstream buffer_;
};

void write_header(std::ostream& os, const std::string& command, const Metadata& config) {
  os << "# faithful " << command << "\n";
  for (const auto& [k, v] : config) os << "# " << k << ": " << v << "\n";
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  bool no_witness = false;
  std::uint64_t seed = 0;
  std::string format = "rows";
  std::string out;
};

void print_report(std::ostream& os, const MetricsReport& r, const std::string& format) {
  if (format == "pretty") {
    os << "concurrence    " << fmt(r.concurrence) << "\n";
    os << "fef            " << fmt(r.fef) << "\n";
    os << "x2_spectrum    " << fmt(r.x2_spectrum[0]) << ' ' << fmt(r.x2_spectrum[1]) << ' ' << fmt(r.x2_spectrum[2])
       << ' ' << fmt(r.x2_spectrum[3]) << "\n";
    os << "faithful       " << fmt(r.faithful) << "\n";
    os << "boundary       " << fmt(r.faithful_boundary) << "\n";
    os << "ppt_entangled  " << fmt(r.ppt_entangled) << "\n";
    if (r.witness_value) os << "witness_value  " << fmt(*r.witness_value) << "\n";
    return;
  }
  os << "concurrence,fef,x2_0,x2_1,x2_2,x2_3,faithful,faithful_boundary,ppt_entangled,witness_value\n";
  os << fmt(r.concurrence) << ',' << fmt(r.fef) << ',' << fmt(r.x2_spectrum[0]) << ',' << fmt(r.x2_spectrum[1]) << ','
     << fmt(r.x2_spectrum[2]) << ',' << fmt(r.x2_spectrum[3]) << ',' << fmt(r.faithful) << ','
     << fmt(r.faithful_boundary) << ',' << fmt(r.ppt_entangled) << ',' << fmt(r.witness_value) << "\n";
}

int cmd_analyze(const AnalyzeArgs& a) {
  const DensityMatrix rho = load_state(a.input);
  AnalyzeOptions opts;
  opts.with_witness = !a.no_witness;
  opts.search.seed = a.seed;
  const MetricsReport r = analyze(rho, opts);
  Sink sink(a.out);
  if (a.format == "rows")
    write_header(sink.stream(), "analyze", {{"input", a.input}, {"seed", std::to_string(a.seed)}});
  print_report(sink.stream(), r, a.format);
  sink.flush();
  return kExitOk;
}

// ---- scans ------------------------------------------------------------------

struct ScanArgs {
  ThetaOptions theta;
  std::string nu_a = "0:1";
  std::string nu_b = "0:1";
  std::string orientation = "x";
  int grid = 21;
  std::string out;
};

int run_scan(const ScanArgs& a, bool two_filter) {
  if (a.grid < 1) throw UsageError("--grid must be >= 1");
  ScanSpec spec;
  const auto thetas = theta_values(a.theta, a.grid);
  const SweepRange na = parse_range(a.nu_a, "--nu-a");
  check_nu_range(na, "--nu-a");
  spec.nu_a = to_grid(na, a.grid);
  if (two_filter) {
    const SweepRange nb = parse_range(a.nu_b, "--nu-b");
    check_nu_range(nb, "--nu-b");
    spec.nu_b = to_grid(nb, a.grid);
  }
  spec.axis = parse_orientation(a.orientation);
  spec.two_filter = two_filter;

  Sink sink(a.out);
  auto& os = sink.stream();
  Metadata cfg{{"theta_source", a.theta.describe()},
               {"nu_a", a.nu_a},
               {"orientation", a.orientation},
               {"grid", std::to_string(a.grid)}};
  if (two_filter) cfg.insert(cfg.begin() + 2, {"nu_b", a.nu_b});
  write_header(os, two_filter ? "scan-two" : "scan-single", cfg);
  os << (two_filter ? "theta,nu_a,nu_b," : "theta,nu,") << "c_closed,c_pipeline,f_closed,f_pipeline,faithful\n";

  // One scan per θ value keeps the θ grid in the user's (c or θ) spacing.
  for (double theta : thetas) {
    spec.theta = Range::single(theta);
    for (const auto& r : scan(spec)) {
      os << fmt(r.theta) << ',' << fmt(r.nu_a) << ',';
      if (two_filter) os << fmt(r.nu_b) << ',';
      os << fmt(r.c_closed) << ',' << fmt(r.c_pipeline) << ',' << fmt(r.f_closed) << ',' << fmt(r.f_pipeline) << ','
         << fmt(r.faithful) << "\n";
    }
  }
  sink.flush();
  return kExitOk;
}

struct BoundaryArgs {
  int grid = 99;
  std::string out;
};

int cmd_scan_boundary(const BoundaryArgs& a) {
  if (a.grid < 1) throw UsageError("--grid must be >= 1");
  Sink sink(a.out);
  auto& os = sink.stream();
  write_header(os, "scan-boundary", {{"grid", std::to_string(a.grid)}});
  os << "c0,c_boundary,theta,nu_star,nu_cos_theta\n";
  for (const auto& p : boundary_curve(a.grid))
    os << fmt(p.c0) << ',' << fmt(p.c_boundary) << ',' << fmt(p.theta) << ',' << fmt(p.nu_star) << ','
       << fmt(p.nu_cos_theta) << "\n";
  sink.flush();
  return kExitOk;
}

// ---- experiment -------------------------------------------------------------

struct TomoArgs {
  std::uint64_t gates = 50'000'000;
  double pair_rate = 0.01;
  double efficiency = 0.2;
  double dark_prob = 4e-5;
  int resamples = 50;
  bool exact_means = false;
  bool rotate_hv = false;

  void add(CLI::App& app) {
    app.add_option("--gates", gates, "Detector gates per setting")->capture_default_str();
    app.add_option("--pair-rate", pair_rate, "Mean pairs per gate")->capture_default_str();
    app.add_option("--efficiency", efficiency, "Detection efficiency per arm")->capture_default_str();
    app.add_option("--dark-prob", dark_prob, "Dark-count probability per gate")->capture_default_str();
    app.add_option("--resamples", resamples, "Bootstrap resamples (>= 50)")->capture_default_str();
    app.add_flag("--exact-means", exact_means, "Use rounded expected counts instead of Poisson samples");
    app.add_flag("--rotate-hv", rotate_hv, "Apply the pi/2 HV basis rotation to reconstructions");
  }

  TomoConfig config(std::uint64_t seed) const {
    TomoConfig c;
    c.gates = gates;
    c.pair_rate = pair_rate;
    c.efficiency = efficiency;
    c.dark_prob = dark_prob;
    c.seed = seed;
    c.validate();
    if (resamples < 50) throw UsageError("--resamples must be >= 50");
    return c;
  }
};

struct ExperimentArgs {
  ThetaOptions theta;
  std::string nu_a = "0.054:0.479";
  std::string nu_b;
  std::string orientation = "x";
  int grid = 10;
  TomoArgs tomo;
  std::uint64_t seed = 0;
  std::string out;
};

struct ExperimentRow {
  double theta = 0.0, nu_a = 0.0, nu_b = 0.0;
  MetricsReport truth;
  ErrorBars rec;
  MleStatus status = MleStatus::Converged;
  int iterations = 0;
  std::string counts_file, state_file;
};

int cmd_experiment(const ExperimentArgs& a) {
  if (a.grid < 1) throw UsageError("--grid must be >= 1");
  const TomoConfig cfg = a.tomo.config(a.seed);
  const auto thetas = theta_values(a.theta, 1);
  if (thetas.size() != 1) throw UsageError("experiment takes a single --theta/--c0 value");
  const double theta = thetas[0];
  const SweepRange na = parse_range(a.nu_a, "--nu-a");
  check_nu_range(na, "--nu-a");
  const bool two = !a.nu_b.empty();
  std::vector<std::pair<double, double>> points;
  if (two) {
    if (na.is_range) throw UsageError("with --nu-b, --nu-a must be a single value");
    const SweepRange nb = parse_range(a.nu_b, "--nu-b");
    check_nu_range(nb, "--nu-b");
    for (double v : to_grid(nb, a.grid).values()) points.emplace_back(na.lo, v);
  } else {
    for (double v : to_grid(na, a.grid).values()) points.emplace_back(v, 0.0);
  }
  const FilterAxis axis = parse_orientation(a.orientation);
  const CountModel model = CountModel::from(cfg);
  MleOptions mle;
  mle.rotate_hv = a.tomo.rotate_hv;

  const auto rows = map_indexed<ExperimentRow>(
      points.size(),
      [&](std::size_t i) {
        ExperimentRow row;
        row.theta = theta;
        row.nu_a = points[i].first;
        row.nu_b = points[i].second;
        const DensityMatrix truth = two ? filtered_state(TwoFilterScenario{theta, row.nu_a, row.nu_b, axis})
                                        : filtered_state(SingleFilterScenario{theta, row.nu_a, axis});
        AnalyzeOptions no_witness;
        no_witness.with_witness = false;
        row.truth = analyze(truth, no_witness);
        const auto records = simulate_counts(truth, model, cfg.gates, derive_seed(a.seed, i),
                                             a.tomo.exact_means ? Sampling::ExactMeans : Sampling::Poisson);
        const MleResult fit = mle_reconstruct(records, model, mle);
        row.status = fit.status;
        row.iterations = fit.iterations;
        row.rec = metrics_with_errorbars(records, model, a.tomo.resamples, derive_seed(derive_seed(a.seed, i), 1),
                                         Exec::Serial, mle);
        if (!a.out.empty()) {
          std::ostringstream id;
          id << "point_" << i;
          row.counts_file = "counts/" + id.str() + ".csv";
          row.state_file = "states/" + id.str() + ".txt";
          const Metadata meta{{"theta", fmt(theta)}, {"nu_a", fmt(row.nu_a)}, {"nu_b", fmt(row.nu_b)},
                              {"seed", std::to_string(derive_seed(a.seed, i))}};
          std::ostringstream counts, state;
          write_counts(counts, records, cfg, meta);
          write_state(state, fit.rho, meta);
          write_text_file(a.out + "/" + row.counts_file, counts.str());
          write_text_file(a.out + "/" + row.state_file, state.str());
        }
        return row;
      },
      Exec::Parallel);

  Sink sink(a.out.empty() ? "" : a.out + "/experiment.csv");
  auto& os = sink.stream();
  write_header(os, "experiment",
               {{"theta", fmt(theta)},
                {"theta_source", a.theta.describe()},
                {"nu_a", a.nu_a},
                {"nu_b", a.nu_b},
                {"orientation", a.orientation},
                {"grid", std::to_string(a.grid)},
                {"gates", std::to_string(cfg.gates)},
                {"pair_rate", fmt(cfg.pair_rate)},
                {"efficiency", fmt(cfg.efficiency)},
                {"dark_prob", fmt(cfg.dark_prob)},
                {"resamples", std::to_string(a.tomo.resamples)},
                {"sampling", a.tomo.exact_means ? "exact-means" : "poisson"},
                {"rotate_hv", fmt(a.tomo.rotate_hv)},
                {"seed", std::to_string(a.seed)}});
  os << "point,theta,nu_a,nu_b,c_true,f_true,faithful_true,c_rec,c_boot_mean,c_std,f_rec,f_boot_mean,f_std,"
        "faithful_rec,mle_status,iterations,boot_nonconverged\n";
  bool all_converged = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    all_converged = all_converged && r.status == MleStatus::Converged && r.rec.nonconverged == 0;
    os << i << ',' << fmt(r.theta) << ',' << fmt(r.nu_a) << ',' << fmt(r.nu_b) << ',' << fmt(r.truth.concurrence)
       << ',' << fmt(r.truth.fef) << ',' << fmt(r.truth.faithful) << ',' << fmt(r.rec.point.concurrence) << ','
       << fmt(r.rec.concurrence_mean) << ',' << fmt(r.rec.concurrence_std) << ',' << fmt(r.rec.point.fef) << ','
       << fmt(r.rec.fef_mean) << ',' << fmt(r.rec.fef_std) << ',' << fmt(r.rec.point.faithful) << ','
       << to_string(r.status) << ',' << r.iterations << ',' << r.rec.nonconverged << "\n";
  }
  sink.flush();
  if (!all_converged) {
    std::cerr << "faithful: maximum-likelihood reconstruction did not converge for every point\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

// ---- tomo -------------------------------------------------------------------

struct TomoCmdArgs {
  std::string input;
  std::string out;  // reconstructed state file
  int resamples = 50;
  std::uint64_t seed = 0;
  bool rotate_hv = false;
};

int cmd_tomo(const TomoCmdArgs& a) {
  if (a.resamples < 50) throw UsageError("--resamples must be >= 50");
  const CountsFile counts = read_counts_file(a.input);
  canonical_records(counts.records);  // names a missing setting
  std::optional<CountModel> model;
  if (counts.apparatus) model = CountModel::from(*counts.apparatus);
  MleOptions mle;
  mle.rotate_hv = a.rotate_hv;
  const MleResult fit = mle_reconstruct(counts.records, model, mle);
  const ErrorBars bars = metrics_with_errorbars(counts.records, model, a.resamples, a.seed, Exec::Parallel, mle);

  const Metadata meta{{"source", a.input},
                      {"model", model ? "apparatus" : "fitted intensity"},
                      {"seed", std::to_string(a.seed)},
                      {"mle_status", to_string(fit.status)},
                      {"iterations", std::to_string(fit.iterations)}};
  if (!a.out.empty()) {
    std::ostringstream state;
    write_state(state, fit.rho, meta);
    write_text_file(a.out, state.str());
  }
  std::ostringstream os;
  write_header(os, "tomo", meta);
  os << "concurrence,c_boot_mean,c_std,fef,f_boot_mean,f_std,faithful,ppt_entangled,fidelity_phi_plus,"
        "log_likelihood,mle_status,iterations,boot_nonconverged\n";
  os << fmt(bars.point.concurrence) << ',' << fmt(bars.concurrence_mean) << ',' << fmt(bars.concurrence_std) << ','
     << fmt(bars.point.fef) << ',' << fmt(bars.fef_mean) << ',' << fmt(bars.fef_std) << ','
     << fmt(bars.point.faithful) << ',' << fmt(bars.point.ppt_entangled) << ','
     << fmt(fit.rho.expectation(bell_vector(Bell::PhiPlus))) << ',' << fmt(fit.log_likelihood) << ','
     << to_string(fit.status) << ',' << fit.iterations << ',' << bars.nonconverged << "\n";
  std::cout << os.str();
  return fit.status == MleStatus::Converged ? kExitOk : kExitNonConvergence;
}

// ---- corpus -----------------------------------------------------------------

int cmd_verify_corpus(const std::string& dir) {
  const CorpusReport report = verify_corpus(dir);
  std::cout << "id,passed,diff\n";
  for (const auto& r : report.results) std::cout << r.id << ',' << fmt(r.passed) << ',' << r.diff << "\n";
  for (const auto& f : report.missing_files) std::cout << "# missing file: " << f << "\n";
  return report.all_passed() ? kExitOk : 1;
}

int cmd_generate_corpus(const std::string& dir) {
  const auto entries = generate_corpus(dir);
  std::cout << "wrote " << entries.size() << " entries to " << dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement and faithfulness metrics for filtered two-qubit states"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "faithful: " << e.what() << "\n";
    return kExitValidation;
  }

  AnalyzeArgs analyze_args;
  analyze_args.seed = seed;
  auto* analyze_cmd = app.add_subcommand("analyze", "Metrics of a density-matrix file");
  analyze_cmd->add_option("input", analyze_args.input, "Density-matrix file")->required();
  analyze_cmd->add_flag("--no-witness", analyze_args.no_witness, "Skip the brute-force witness search");
  analyze_cmd->add_option("--seed", analyze_args.seed, "Seed for the witness search (env FAITHFUL_SEED)");
  analyze_cmd->add_option("--format", analyze_args.format, "rows or pretty")
      ->check(CLI::IsMember({"rows", "pretty"}));
  analyze_cmd->add_option("--out", analyze_args.out, "Output path (default stdout)");

  ScanArgs single_args;
  auto* single_cmd = app.add_subcommand("scan-single", "Filter on qubit A of a rank-2 Bell-diagonal state");
  single_args.theta.add(*single_cmd, "-0.181");
  single_cmd->add_option("--nu-a,--nu", single_args.nu_a, "Filter magnitude, value or lo:hi")->capture_default_str();
  single_cmd->add_option("--orientation", single_args.orientation, "x, z or nx,ny,nz")->capture_default_str();
  single_cmd->add_option("--grid", single_args.grid, "Points per ranged axis")->capture_default_str();
  single_cmd->add_option("--out", single_args.out, "Output path (default stdout)");

  ScanArgs two_args;
  two_args.nu_a = "0.465";
  two_args.nu_b = "0.036:0.455";
  auto* two_cmd = app.add_subcommand("scan-two", "Filters on both qubits along a shared axis");
  two_args.theta.add(*two_cmd, "-0.181");
  two_cmd->add_option("--nu-a", two_args.nu_a, "Filter magnitude on A, value or lo:hi")->capture_default_str();
  two_cmd->add_option("--nu-b", two_args.nu_b, "Filter magnitude on B, value or lo:hi")->capture_default_str();
  two_cmd->add_option("--orientation", two_args.orientation, "x, z or nx,ny,nz")->capture_default_str();
  two_cmd->add_option("--grid", two_args.grid, "Points per ranged axis")->capture_default_str();
  two_cmd->add_option("--out", two_args.out, "Output path (default stdout)");

  BoundaryArgs boundary_args;
  auto* boundary_cmd = app.add_subcommand("scan-boundary", "Unfaithful-region boundary C0 (1 - C0)/(1 + C0)");
  boundary_cmd->add_option("--grid", boundary_args.grid, "Number of C0 samples")->capture_default_str();
  boundary_cmd->add_option("--out", boundary_args.out, "Output path (default stdout)");

  ExperimentArgs exp_args;
  exp_args.seed = seed;
  auto* exp_cmd = app.add_subcommand("experiment", "Simulated tomography over a filter sweep");
  exp_args.theta.add(*exp_cmd, "-0.181");
  exp_cmd->add_option("--nu-a", exp_args.nu_a, "Filter magnitude on A, value or lo:hi")->capture_default_str();
  exp_cmd->add_option("--nu-b", exp_args.nu_b, "Filter magnitude on B, value or lo:hi (two-filter sweep)");
  exp_cmd->add_option("--orientation", exp_args.orientation, "x, z or nx,ny,nz")->capture_default_str();
  exp_cmd->add_option("--grid", exp_args.grid, "Sweep points")->capture_default_str();
  exp_cmd->add_option("--seed", exp_args.seed, "Seed (env FAITHFUL_SEED)");
  exp_cmd->add_option("--out", exp_args.out, "Output directory (default: table on stdout only)");
  exp_args.tomo.add(*exp_cmd);

  TomoCmdArgs tomo_args;
  tomo_args.seed = seed;
  auto* tomo_cmd = app.add_subcommand("tomo", "Maximum-likelihood reconstruction from a counts file");
  tomo_cmd->add_option("input", tomo_args.input, "Counts file")->required();
  tomo_cmd->add_option("--out", tomo_args.out, "Write the reconstructed density matrix here");
  tomo_cmd->add_option("--resamples", tomo_args.resamples, "Bootstrap resamples (>= 50)")->capture_default_str();
  tomo_cmd->add_option("--seed", tomo_args.seed, "Bootstrap seed (env FAITHFUL_SEED)");
  tomo_cmd->add_flag("--rotate-hv", tomo_args.rotate_hv, "Apply the pi/2 HV basis rotation");

  std::string corpus_dir = "corpus";
  auto* verify_cmd = app.add_subcommand("verify-corpus", "Recompute every regression-corpus entry");
  verify_cmd->add_option("--corpus", corpus_dir, "Corpus directory")->capture_default_str();
  std::string generate_dir;
  auto* generate_cmd = app.add_subcommand("generate-corpus", "Regenerate the regression corpus");
  generate_cmd->add_option("--out", generate_dir, "Corpus directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_args);
    if (*single_cmd) return run_scan(single_args, false);
    if (*two_cmd) return run_scan(two_args, true);
    if (*boundary_cmd) return cmd_scan_boundary(boundary_args);
    if (*exp_cmd) return cmd_experiment(exp_args);
    if (*tomo_cmd) return cmd_tomo(tomo_args);
    if (*verify_cmd) return cmd_verify_corpus(corpus_dir);
    if (*generate_cmd) return cmd_generate_corpus(generate_dir);
  } catch (const std::invalid_argument& e) {
    // UnphysicalState, ParseError, UsageError and option validation.
    std::cerr << "faithful: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "faithful: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "faithful: numerical failure: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "faithful: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

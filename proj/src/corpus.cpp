#include "faithful/corpus.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "faithful/analytic.hpp"
#include "faithful/channels.hpp"
#include "faithful/io.hpp"
#include "faithful/metrics.hpp"
#include "faithful/tomography.hpp"

namespace faithful {

namespace {

constexpr const char* kHeader = "id,kind,file,concurrence,fef,faithful,ppt_entangled,tolerance,provenance,anchor";

struct Measured {
  double concurrence = 0.0;
  double fef = 0.0;
  bool faithful = false;
  bool ppt_entangled = false;
};

Measured measure(const DensityMatrix& rho) {
  return {concurrence(rho), fef_spectral(rho), is_faithful(rho), ppt_entangled(rho)};
}

Measured measure_entry(const CorpusEntry& e, const std::string& dir) {
  const std::string path = dir + "/" + e.file;
  if (e.kind == CorpusKind::State) return measure(load_state(path));
  const CountsFile counts = read_counts_file(path);
  std::optional<CountModel> model;
  if (counts.apparatus) model = CountModel::from(*counts.apparatus);
  return measure(mle_reconstruct(counts.records, model).rho);
}

CorpusResult check(const CorpusEntry& e, const std::string& dir) {
  CorpusResult r{e.id, false, ""};
  try {
    const Measured m = measure_entry(e, dir);
    std::ostringstream diff;
    if (!(std::abs(m.concurrence - e.concurrence) <= e.tolerance))
      diff << "concurrence expected " << format_double(e.concurrence) << " got " << format_double(m.concurrence) << "; ";
    if (!(std::abs(m.fef - e.fef) <= e.tolerance))
      diff << "fef expected " << format_double(e.fef) << " got " << format_double(m.fef) << "; ";
    if (m.faithful != e.faithful) diff << "faithful expected " << e.faithful << " got " << m.faithful << "; ";
    if (m.ppt_entangled != e.ppt_entangled)
      diff << "ppt_entangled expected " << e.ppt_entangled << " got " << m.ppt_entangled << "; ";
    r.diff = diff.str();
    r.passed = r.diff.empty();
  } catch (const std::exception& ex) {
    r.diff = ex.what();
  }
  return r;
}

bool parse_bool(const std::string& s, const std::string& source, int line) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError(source, line, "expected true or false, found '" + s + "'");
}

double parse_number(const std::string& s, const std::string& source, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError(source, line, "malformed number '" + s + "'");
  return v;
}

// Corpus definition --------------------------------------------------------

struct Spec {
  std::string id;
  DensityMatrix rho;
  double tolerance;
  std::string provenance;
  std::string anchor;
};

DensityMatrix initial_state() { return dephase(bell_state(Bell::PhiPlus), {1.0 - 0.181, {0.0, 0.0, 1.0}}); }

double experiment_theta() { return 0.5 * std::acos(-0.181); }

std::vector<Spec> state_specs() {
  const double c0 = std::numbers::sqrt2 - 1.0;
  const double th = experiment_theta();
  std::vector<Spec> s;
  s.push_back({"bell_phi_plus", bell_state(Bell::PhiPlus), 1e-9, "trivial", "Bell state: C = 1, F = 1"});
  s.push_back({"bell_phi_minus", bell_state(Bell::PhiMinus), 1e-9, "trivial", "Bell state: C = 1, F = 1"});
  s.push_back({"bell_psi_plus", bell_state(Bell::PsiPlus), 1e-9, "trivial", "Bell state: C = 1, F = 1"});
  s.push_back({"bell_psi_minus", bell_state(Bell::PsiMinus), 1e-9, "trivial", "Bell state: C = 1, F = 1"});
  s.push_back({"maximally_mixed", DensityMatrix{}, 1e-9, "trivial", "I/4: C = 0, F = 1/4"});
  s.push_back({"initial_dephased", initial_state(), 1e-9, "reference",
               "dephased Phi+ with initial concurrence C0 = 0.181"});
  s.push_back({"extremal_unfaithful", filtered_state(SingleFilterScenario{0.5 * std::acos(c0), std::sqrt(c0)}), 1e-9,
               "reference", "highest concurrence of an unfaithful state: C = 3 - 2 sqrt 2 at F = 1/2"});
  s.push_back({"single_nu_0.054", filtered_state(SingleFilterScenario{th, 0.054}), 1e-9, "reference",
               "single-filter sweep start nu_A = 0.054"});
  s.push_back({"single_nu_0.425", filtered_state(SingleFilterScenario{th, 0.425}), 1e-9, "reference",
               "just below the threshold nu_A = 0.4254: still faithful"});
  s.push_back({"single_nu_0.426", filtered_state(SingleFilterScenario{th, 0.426}), 1e-9, "reference",
               "unfaithful from nu_A >= 0.426"});
  s.push_back({"single_nu_0.479", filtered_state(SingleFilterScenario{th, 0.479}), 1e-9, "reference",
               "single-filter sweep end nu_A = 0.479"});
  s.push_back({"bell_filtered_nu_0.9", filtered_state(SingleFilterScenario{0.0, 0.9}), 1e-9, "reference",
               "C0 = 1: a filtered Bell state is never unfaithful"});
  for (double nb : {0.036, 0.106, 0.375, 0.455}) {
    std::ostringstream id, anchor;
    id << "two_x_nu_b_" << nb;
    anchor << "two x filters, nu_A = 0.465, nu_B = " << nb;
    s.push_back({id.str(), filtered_state(TwoFilterScenario{th, 0.465, nb}), 1e-9, "reference", anchor.str()});
  }
  s.push_back({"two_z_nu_b_0.455", filtered_state(TwoFilterScenario{th, 0.469, 0.455, FilterAxis::z()}), 1e-9,
               "reference", "two z filters, nu_A = 0.469: always faithful, F approaches 1/2 from above"});
  s.push_back({"single_z_pi_8", filtered_state(SingleFilterScenario{std::numbers::pi / 8, 0.469, FilterAxis::z()}),
               1e-9, "derived", "z filter at theta = pi/8, nu = 0.469"});
  s.push_back({"rank2_fef_0.55", rank2_bd(Rank2BDParams::from_cos2theta(0.1)), 1e-9, "derived",
               "rank-2 Bell-diagonal state with F = 0.55"});
  return s;
}

}  // namespace

bool CorpusReport::all_passed() const {
  if (!missing_files.empty()) return false;
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

std::vector<CorpusEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::vector<CorpusEntry> out;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kHeader) throw ParseError(path, lineno, std::string("expected header '") + kHeader + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (int i = 0; i < 9; ++i) {
      const auto comma = line.find(',', pos);
      if (comma == std::string::npos) throw ParseError(path, lineno, "expected 10 fields");
      f.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    f.push_back(line.substr(pos));
    CorpusEntry e;
    e.id = f[0];
    if (f[1] == "state") e.kind = CorpusKind::State;
    else if (f[1] == "counts") e.kind = CorpusKind::Counts;
    else throw ParseError(path, lineno, "kind must be state or counts");
    e.file = f[2];
    e.concurrence = parse_number(f[3], path, lineno);
    e.fef = parse_number(f[4], path, lineno);
    e.faithful = parse_bool(f[5], path, lineno);
    e.ppt_entangled = parse_bool(f[6], path, lineno);
    e.tolerance = parse_number(f[7], path, lineno);
    e.provenance = f[8];
    if (e.provenance != "reference" && e.provenance != "trivial" && e.provenance != "derived")
      throw ParseError(path, lineno, "provenance must be reference, trivial or derived");
    e.anchor = f[9];
    out.push_back(e);
  }
  if (!header) throw ParseError(path, lineno, "empty manifest");
  return out;
}

std::string format_manifest(const std::vector<CorpusEntry>& entries) {
  std::ostringstream os;
  os << kHeader << "\n";
  for (const auto& e : entries)
    os << e.id << ',' << (e.kind == CorpusKind::State ? "state" : "counts") << ',' << e.file << ','
       << format_double(e.concurrence) << ',' << format_double(e.fef) << ',' << (e.faithful ? "true" : "false") << ','
       << (e.ppt_entangled ? "true" : "false") << ',' << format_double(e.tolerance) << ',' << e.provenance << ','
       << e.anchor << "\n";
  return os.str();
}

CorpusReport verify_entries(const std::vector<CorpusEntry>& entries, const std::string& dir, Exec exec) {
  CorpusReport report;
  for (const auto& e : entries)
    if (!std::filesystem::exists(dir + "/" + e.file)) report.missing_files.push_back(e.file);
  report.results = map_indexed<CorpusResult>(entries.size(), [&](std::size_t i) { return check(entries[i], dir); }, exec);
  return report;
}

CorpusReport verify_corpus(const std::string& dir, Exec exec) {
  return verify_entries(read_manifest(dir + "/manifest.csv"), dir, exec);
}

std::vector<CorpusEntry> generate_corpus(const std::string& dir) {
  std::vector<CorpusEntry> entries;
  for (const auto& s : state_specs()) {
    CorpusEntry e;
    e.id = s.id;
    e.kind = CorpusKind::State;
    e.file = "states/" + s.id + ".txt";
    std::ostringstream os;
    write_state(os, s.rho, {{"id", s.id}, {"note", s.anchor}});
    write_text_file(dir + "/" + e.file, os.str());
    const Measured m = measure(load_state(dir + "/" + e.file));
    e.concurrence = m.concurrence;
    e.fef = m.fef;
    e.faithful = m.faithful;
    e.ppt_entangled = m.ppt_entangled;
    e.tolerance = s.tolerance;
    e.provenance = s.provenance;
    e.anchor = s.anchor;
    entries.push_back(e);
  }

  const auto add_counts = [&](const std::string& id, const std::vector<CountRecord>& records,
                              const std::optional<TomoConfig>& cfg, double tolerance, const std::string& provenance,
                              const std::string& anchor) {
    CorpusEntry e;
    e.id = id;
    e.kind = CorpusKind::Counts;
    e.file = "counts/" + id + ".csv";
    std::ostringstream os;
    write_counts(os, records, cfg, {{"id", id}, {"note", anchor}});
    write_text_file(dir + "/" + e.file, os.str());
    e.tolerance = tolerance;
    e.provenance = provenance;
    e.anchor = anchor;
    const Measured m = measure_entry(e, dir);
    e.concurrence = m.concurrence;
    e.fef = m.fef;
    e.faithful = m.faithful;
    e.ppt_entangled = m.ppt_entangled;
    entries.push_back(e);
  };

  TomoConfig cfg;  // 5e7 gates, pair rate 0.01, efficiency 0.2, dark 4e-5
  cfg.seed = 2021;
  add_counts("counts_phi_plus", simulate_counts(bell_state(Bell::PhiPlus), cfg), cfg, 1e-6, "derived",
             "36 settings over 5e7 gates from Phi+");
  add_counts("counts_initial_dephased", simulate_counts(initial_state(), cfg), cfg, 1e-6, "derived",
             "36 settings over 5e7 gates from the dephased initial state");
  std::vector<CountRecord> uniform;
  for (const auto& s : all_settings()) uniform.push_back({s, 50'000'000, 5000});
  add_counts("counts_uniform", uniform, std::nullopt, 1e-6, "trivial", "uniform counts reconstruct to I/4");

  write_text_file(dir + "/manifest.csv", format_manifest(entries));
  return entries;
}

}  // namespace faithful

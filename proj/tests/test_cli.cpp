#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "faithful/analytic.hpp"
#include "faithful/io.hpp"

using namespace faithful;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(FAITHFUL_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Data rows (non-comment lines after the header), split on commas.
std::vector<std::vector<std::string>> rows(const std::string& csv, std::vector<std::string>* header = nullptr) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (!seen_header) {
      seen_header = true;
      if (header) *header = f;
      continue;
    }
    out.push_back(f);
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("faithful_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("scan-single emits closed form and pipeline columns that agree") {
  const Run r = run("scan-single --nu-a 0.054:0.479 --grid 9");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# faithful scan-single\n", 0) == 0);
  std::vector<std::string> header;
  const auto data = rows(r.out, &header);
  CHECK(header == std::vector<std::string>{"theta", "nu", "c_closed", "c_pipeline", "f_closed", "f_pipeline", "faithful"});
  REQUIRE(data.size() == 9);
  const double theta = 0.5 * std::acos(-0.181);
  for (const auto& row : data) {
    REQUIRE(row.size() == 7);
    const double nu = std::stod(row[1]);
    CHECK(std::stod(row[0]) == doctest::Approx(theta).epsilon(1e-15));
    CHECK(std::stod(row[2]) == doctest::Approx(conc_single(SingleFilterScenario{theta, nu})).epsilon(1e-14));
    CHECK(std::abs(std::stod(row[3]) - std::stod(row[2])) < 1e-9);
    CHECK(std::abs(std::stod(row[5]) - std::stod(row[4])) < 1e-9);
    CHECK(row[6] == (std::stod(row[5]) > 0.5 ? "true" : "false"));
  }
}

TEST_CASE("arbitrary orientation keeps the concurrence closed form only") {
  const Run r = run("scan-single --nu 0.3 --orientation 0,1,0 --c0 0.2");
  REQUIRE(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 1);
  // Single-filter concurrence does not depend on the filter direction.
  CHECK(std::abs(std::stod(data[0][2]) - std::stod(data[0][3])) < 1e-9);
  CHECK(data[0][4].empty());
  CHECK_FALSE(data[0][5].empty());
}

TEST_CASE("scan-two and scan-boundary shapes") {
  const Run two = run("scan-two --nu-a 0.465 --nu-b 0.036:0.455 --grid 5 --orientation z");
  REQUIRE(two.code == 0);
  CHECK(rows(two.out).size() == 5);
  const Run grid2 = run("scan-two --nu-a 0.1:0.2 --nu-b 0.1:0.3 --grid 3");
  REQUIRE(grid2.code == 0);
  CHECK(rows(grid2.out).size() == 9);
  const Run b = run("scan-boundary --grid 4");
  REQUIRE(b.code == 0);
  for (const auto& row : rows(b.out)) {
    const double c0 = std::stod(row[0]);
    CHECK(std::stod(row[1]) == doctest::Approx(c0 * (1 - c0) / (1 + c0)).epsilon(1e-14));
  }
}

TEST_CASE("validation failures exit with status 2") {
  CHECK(run("scan-single --theta 0.5 --c0 0.1").code == 2);
  CHECK(run("scan-single --nu 1.2").code == 2);
  CHECK(run("scan-single --nu abc").code == 2);
  CHECK(run("scan-single --c0 -1").code == 2);
  CHECK(run("scan-single --theta 2").code == 2);
  CHECK(run("scan-single --orientation 0,0,0").code == 2);
  CHECK(run("scan-single --grid 0").code == 2);
  CHECK(run("experiment --resamples 10 --grid 1").code == 2);
  CHECK(run("experiment --efficiency 1.5 --grid 1").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("analyze /nonexistent/state.txt").code == 2);
  CHECK(run("scan-single", "FAITHFUL_SEED=abc").code == 2);
}

TEST_CASE("malformed input files name the problem") {
  const fs::path dir = scratch("malformed");
  write_text_file((dir / "s.txt").string(), "basis HV\n[1,0] [0,0] [0,0]\n");
  const Run bad_state = run("analyze " + (dir / "s.txt").string());
  CHECK(bad_state.code == 2);
  CHECK(bad_state.out.find("s.txt:2:") != std::string::npos);

  std::ostringstream counts;
  std::vector<CountRecord> records;
  for (const auto& s : all_settings())
    if (!(s == MeasurementSetting{Pol::A, Pol::L})) records.push_back({s, 1000, 10});
  write_counts(counts, records, std::nullopt);
  write_text_file((dir / "c.csv").string(), counts.str());
  const Run missing = run("tomo " + (dir / "c.csv").string());
  CHECK(missing.code == 2);
  CHECK(missing.out.find("missing measurement setting AL") != std::string::npos);
}

TEST_CASE("analyze reports the corpus values") {
  const Run r = run(std::string("analyze --no-witness ") + FAITHFUL_CORPUS_DIR + "/states/initial_dephased.txt");
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto data = rows(r.out, &header);
  REQUIRE(data.size() == 1);
  CHECK(header[0] == "concurrence");
  CHECK(std::stod(data[0][0]) == doctest::Approx(0.181).epsilon(1e-12));
  CHECK(std::stod(data[0][1]) == doctest::Approx(0.5905).epsilon(1e-12));
  CHECK(data[0][6] == "true");
  CHECK(data[0].back().empty());

  const Run w = run(std::string("analyze ") + FAITHFUL_CORPUS_DIR + "/states/rank2_fef_0.55.txt");
  REQUIRE(w.code == 0);
  CHECK(std::stod(rows(w.out)[0].back()) < 0.0);
}

TEST_CASE("experiment output is byte-identical for a fixed seed") {
  const std::string args = "experiment --grid 2 --nu-a 0.1:0.4 --gates 5000000";
  const Run a = run(args + " --seed 11");
  const Run b = run(args + " --seed 11");
  const Run env = run(args, "FAITHFUL_SEED=11");
  const Run c = run(args + " --seed 12");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == env.out);
  CHECK(a.out != c.out);
  CHECK(a.out.find("# seed: 11\n") != std::string::npos);
  CHECK(a.out.find("# gates: 5000000\n") != std::string::npos);

  const fs::path d1 = scratch("exp1"), d2 = scratch("exp2");
  REQUIRE(run(args + " --seed 11 --out " + d1.string()).code == 0);
  REQUIRE(run(args + " --seed 11 --out " + d2.string()).code == 0);
  for (const char* f : {"experiment.csv", "counts/point_0.csv", "counts/point_1.csv", "states/point_1.txt"}) {
    INFO(f);
    CHECK_FALSE(read_all(d1 / f).empty());
    CHECK(read_all(d1 / f) == read_all(d2 / f));
  }
  CHECK(read_all(d1 / "experiment.csv") == a.out);
}

TEST_CASE("experiment rows track the true metrics") {
  const Run r = run("experiment --grid 3 --exact-means");
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto data = rows(r.out, &header);
  REQUIRE(data.size() == 3);
  REQUIRE(header[4] == "c_true");
  REQUIRE(header[7] == "c_rec");
  REQUIRE(header[14] == "mle_status");
  for (const auto& row : data) {
    CHECK(std::abs(std::stod(row[4]) - std::stod(row[7])) < 2e-3);
    CHECK(std::abs(std::stod(row[5]) - std::stod(row[10])) < 2e-3);
    CHECK(row[14] == "converged");
  }
}

TEST_CASE("tomo reconstructs a written counts file and the state file round trips") {
  const fs::path dir = scratch("tomo");
  REQUIRE(run("experiment --grid 1 --nu-a 0.2 --out " + dir.string()).code == 0);
  const Run r = run("tomo " + (dir / "counts/point_0.csv").string() + " --out " + (dir / "rec.txt").string());
  REQUIRE(r.code == 0);
  const auto exp_rows = rows(read_all(dir / "experiment.csv"));
  const auto tomo_rows = rows(r.out);
  // Same counts, same deterministic MLE: identical point estimate.
  CHECK(tomo_rows[0][0] == exp_rows[0][7]);
  // The two state files differ only in their metadata comments.
  const auto body = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
      if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
  };
  CHECK(body(read_all(dir / "rec.txt")) == body(read_all(dir / "states/point_0.txt")));
  const Run a = run("analyze --no-witness " + (dir / "rec.txt").string());
  REQUIRE(a.code == 0);
  CHECK(rows(a.out)[0][0] == tomo_rows[0][0]);
}

TEST_CASE("verify-corpus passes on the committed corpus") {
  const Run r = run(std::string("verify-corpus --corpus ") + FAITHFUL_CORPUS_DIR);
  CHECK(r.code == 0);
  for (const auto& row : rows(r.out)) CHECK(row[1] == "true");
}

}  // TEST_SUITE cli

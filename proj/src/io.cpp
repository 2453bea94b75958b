#include "faithful/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace faithful {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_uint(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (errno == ERANGE) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

// "# key: value" -> (key, value); "# text" -> (text, "").
std::pair<std::string, std::string> parse_meta(const std::string& line) {
  const std::string body = trim(line.substr(1));
  const auto colon = body.find(':');
  if (colon == std::string::npos) return {body, ""};
  return {trim(body.substr(0, colon)), trim(body.substr(colon + 1))};
}

CMat4 basis_change(Basis b) {
  CMat2 w = CMat2::identity();
  const double h = std::sqrt(0.5);
  if (b == Basis::DA) {
    w(0, 0) = h; w(0, 1) = h;
    w(1, 0) = h; w(1, 1) = -h;
  } else if (b == Basis::RL) {
    w(0, 0) = h; w(0, 1) = h;
    w(1, 0) = cplx(0, h); w(1, 1) = cplx(0, -h);
  }
  return kron(w, w);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return in;
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, const std::string& what)
    : std::invalid_argument(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Basis basis_from_name(const std::string& name) {
  if (name == "computational") return Basis::Computational;
  if (name == "HV") return Basis::HV;
  if (name == "DA") return Basis::DA;
  if (name == "RL") return Basis::RL;
  throw std::invalid_argument("unknown basis '" + name + "' (expected computational, HV, DA or RL)");
}

const char* basis_name(Basis b) {
  switch (b) {
    case Basis::Computational: return "computational";
    case Basis::HV: return "HV";
    case Basis::DA: return "DA";
    case Basis::RL: return "RL";
  }
  return "computational";
}

CMat4 to_basis(const CMat4& computational, Basis b) {
  const CMat4 w = basis_change(b);
  return w.adjoint() * computational * w;
}

CMat4 from_basis(const CMat4& in_basis, Basis b) {
  const CMat4 w = basis_change(b);
  return w * in_basis * w.adjoint();
}

void write_state(std::ostream& os, const DensityMatrix& rho, const Metadata& metadata, Basis basis) {
  for (const auto& [k, v] : metadata) os << "# " << k << (v.empty() ? "" : ": ") << v << "\n";
  os << "basis " << basis_name(basis) << "\n";
  const CMat4 m = to_basis(rho.matrix(), basis);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (j) os << ' ';
      os << '[' << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag()) << ']';
    }
    os << "\n";
  }
}

StateFile parse_state(std::istream& is, const std::string& source) {
  static const std::regex entry(R"(\[([^,\]]*),([^\]]*)\])");
  StateFile out;
  std::string line;
  int lineno = 0;
  bool have_basis = false;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      out.metadata.push_back(parse_meta(t));
      continue;
    }
    if (!have_basis) {
      if (t.rfind("basis", 0) != 0) throw ParseError(source, lineno, "expected 'basis <name>' before the matrix");
      try {
        out.basis = basis_from_name(trim(t.substr(5)));
      } catch (const std::invalid_argument& e) {
        throw ParseError(source, lineno, e.what());
      }
      have_basis = true;
      continue;
    }
    if (row == 4) throw ParseError(source, lineno, "unexpected content after 4 matrix rows");
    std::size_t col = 0;
    std::string rest = t;
    std::smatch m;
    while (std::regex_search(rest, m, entry)) {
      if (!trim(m.prefix().str()).empty()) throw ParseError(source, lineno, "unexpected text '" + trim(m.prefix()) + "'");
      if (col == 4) throw ParseError(source, lineno, "more than 4 entries in row");
      const auto re = parse_double(m[1].str()), im = parse_double(m[2].str());
      if (!re || !im) throw ParseError(source, lineno, "malformed entry '" + m[0].str() + "'");
      out.matrix(row, col++) = cplx(*re, *im);
      rest = m.suffix().str();
    }
    if (!trim(rest).empty()) throw ParseError(source, lineno, "unexpected text '" + trim(rest) + "'");
    if (col != 4) throw ParseError(source, lineno, "expected 4 [re,im] entries, found " + std::to_string(col));
    ++row;
  }
  if (!have_basis) throw ParseError(source, lineno, "missing 'basis' line");
  if (row != 4) throw ParseError(source, lineno, "expected 4 matrix rows, found " + std::to_string(row));
  out.matrix = from_basis(out.matrix, out.basis);
  return out;
}

StateFile read_state_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_state(in, path);
}

DensityMatrix load_state(const std::string& path) { return DensityMatrix(read_state_file(path).matrix); }

void write_counts(std::ostream& os, const std::vector<CountRecord>& records, const std::optional<TomoConfig>& cfg,
                  const Metadata& metadata) {
  for (const auto& [k, v] : metadata) os << "# " << k << (v.empty() ? "" : ": ") << v << "\n";
  if (cfg) {
    os << "# pair_rate: " << format_double(cfg->pair_rate) << "\n";
    os << "# efficiency: " << format_double(cfg->efficiency) << "\n";
    os << "# dark_prob: " << format_double(cfg->dark_prob) << "\n";
  }
  os << "a,b,gates,coincidences\n";
  for (const auto& r : records)
    os << pol_label(r.setting.a) << ',' << pol_label(r.setting.b) << ',' << r.gates << ',' << r.coincidences << "\n";
}

CountsFile parse_counts(std::istream& is, const std::string& source) {
  CountsFile out;
  std::optional<double> pair_rate, efficiency, dark;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      auto [k, v] = parse_meta(t);
      std::optional<double>* slot = k == "pair_rate" ? &pair_rate : k == "efficiency" ? &efficiency
                                    : k == "dark_prob" ? &dark : nullptr;
      if (slot) {
        *slot = parse_double(v);
        if (!*slot) throw ParseError(source, lineno, "malformed value for " + k);
      } else {
        out.metadata.emplace_back(std::move(k), std::move(v));
      }
      continue;
    }
    if (!have_header) {
      if (t != "a,b,gates,coincidences")
        throw ParseError(source, lineno, "expected header 'a,b,gates,coincidences'");
      have_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (fields.size() != 4) throw ParseError(source, lineno, "expected 4 fields, found " + std::to_string(fields.size()));
    CountRecord r;
    try {
      if (fields[0].size() != 1 || fields[1].size() != 1) throw std::invalid_argument("setting labels are single letters");
      r.setting = {pol_from_label(fields[0][0]), pol_from_label(fields[1][0])};
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, lineno, e.what());
    }
    const auto gates = parse_uint(fields[2]), k = parse_uint(fields[3]);
    if (!gates || *gates == 0) throw ParseError(source, lineno, "gates must be a positive integer");
    if (!k) throw ParseError(source, lineno, "coincidences must be a non-negative integer");
    if (*k > *gates) throw ParseError(source, lineno, "coincidences exceed gates");
    r.gates = *gates;
    r.coincidences = *k;
    for (const auto& prev : out.records)
      if (prev.setting == r.setting)
        throw ParseError(source, lineno, "duplicate measurement setting " + r.setting.label());
    out.records.push_back(r);
  }
  if (!have_header) throw ParseError(source, lineno, "missing header 'a,b,gates,coincidences'");
  const int known = (pair_rate ? 1 : 0) + (efficiency ? 1 : 0) + (dark ? 1 : 0);
  if (known == 3) {
    TomoConfig cfg;
    cfg.pair_rate = *pair_rate;
    cfg.efficiency = *efficiency;
    cfg.dark_prob = *dark;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, lineno, e.what());
    }
    out.apparatus = cfg;
  } else if (known != 0) {
    throw ParseError(source, lineno, "pair_rate, efficiency and dark_prob must be given together");
  }
  return out;
}

CountsFile read_counts_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_counts(in, path);
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace faithful

#pragma once

// Text formats.
//
// Density matrix:
//   # key: value            (any number of metadata lines)
//   basis computational     (computational | HV | DA | RL)
//   [re,im] [re,im] [re,im] [re,im]
//   ... 4 rows
// Entries are written with %.17g. In the DA and RL bases the rows/columns
// refer to the product states DD, DA, AD, AA (resp. RR, RL, LR, LL) and are
// converted to the computational basis on reading.
//
// Counts:
//   # pair_rate: 0.01       (the three apparatus keys are optional but must
//   # efficiency: 0.2        appear together; without them the intensity is
//   # dark_prob: 4e-05       fitted)
//   a,b,gates,coincidences
//   H,H,50000000,5017
//   ... 36 rows

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "faithful/states.hpp"
#include "faithful/tomography.hpp"

namespace faithful {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// "%.17g"
std::string format_double(double x);

enum class Basis { Computational, HV, DA, RL };

Basis basis_from_name(const std::string& name);  // throws std::invalid_argument
const char* basis_name(Basis b);

/// rho expressed in the product basis `b` (rows/columns in a-major order).
CMat4 to_basis(const CMat4& computational, Basis b);
CMat4 from_basis(const CMat4& in_basis, Basis b);

struct StateFile {
  CMat4 matrix;  // computational basis, not yet validated as a state
  Basis basis = Basis::Computational;
  Metadata metadata;
};

void write_state(std::ostream& os, const DensityMatrix& rho, const Metadata& metadata = {},
                 Basis basis = Basis::Computational);
StateFile parse_state(std::istream& is, const std::string& source = "<input>");
StateFile read_state_file(const std::string& path);

/// Parses and validates; UnphysicalState propagates.
DensityMatrix load_state(const std::string& path);

struct CountsFile {
  std::vector<CountRecord> records;  // file order
  std::optional<TomoConfig> apparatus;  // gates and seed unused
  Metadata metadata;
};

void write_counts(std::ostream& os, const std::vector<CountRecord>& records, const std::optional<TomoConfig>& cfg,
                  const Metadata& metadata = {});
CountsFile parse_counts(std::istream& is, const std::string& source = "<input>");
CountsFile read_counts_file(const std::string& path);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace faithful

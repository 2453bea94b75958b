#pragma once

// Frozen regression corpus: state and counts files with the metrics they are
// expected to produce. Layout:
//   <dir>/manifest.csv
//   <dir>/states/<id>.txt
//   <dir>/counts/<id>.csv
// manifest.csv columns:
//   id,kind,file,concurrence,fef,faithful,ppt_entangled,tolerance,provenance,anchor
// kind is "state" or "counts"; provenance is one of reference (a published
// value), trivial or derived; anchor is free text (the rest of the line).

#include <string>
#include <vector>

#include "faithful/kernels.hpp"

namespace faithful {

enum class CorpusKind { State, Counts };

struct CorpusEntry {
  std::string id;
  CorpusKind kind = CorpusKind::State;
  std::string file;  // relative to the corpus directory
  double concurrence = 0.0;
  double fef = 0.0;
  bool faithful = false;
  bool ppt_entangled = false;
  double tolerance = 1e-9;
  std::string provenance;
  std::string anchor;
};

struct CorpusResult {
  std::string id;
  bool passed = false;
  std::string diff;  // empty on success
};

struct CorpusReport {
  std::vector<CorpusResult> results;
  std::vector<std::string> missing_files;
  bool all_passed() const;
};

std::vector<CorpusEntry> read_manifest(const std::string& path);
std::string format_manifest(const std::vector<CorpusEntry>& entries);

/// Recomputes every entry. Counts entries are reconstructed by MLE (with the
/// file's apparatus model when present).
CorpusReport verify_entries(const std::vector<CorpusEntry>& entries, const std::string& dir,
                            Exec exec = Exec::Parallel);

/// verify_entries(read_manifest(dir + "/manifest.csv"), dir).
CorpusReport verify_corpus(const std::string& dir, Exec exec = Exec::Parallel);

/// Regenerates the corpus files and manifest in `dir` from the pipeline.
std::vector<CorpusEntry> generate_corpus(const std::string& dir);

}  // namespace faithful

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deadcore/geometry.hpp"
#include "deadcore/solver.hpp"

namespace deadcore {

// One experiment run, parsed from a sectioned key/value file:
//   [experiment] name = ground-state, plus experiment-specific keys
//   [grid]       dim, n, L
//   [problem]    p, optional terminal smoothing eps
//   [shape]      file = <path>, or inline primitive keys (see shape format)
//   [solver]     any SolveConfig field by name
//   [output]     dir = <path>
struct RunConfig {
  std::string experiment;
  int dim = 1;
  int n = 257;
  double L = 4.0;
  double p = 1.0;
  Shape shape;
  bool has_shape = false;
  std::string shape_text;  // source the shape was parsed from; hashed
  SolveConfig solve;
  std::string out_dir = "out";
  std::map<std::string, std::string> extra;  // unconsumed [experiment] keys
  std::string origin;
};

RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

// Deterministic serialization of everything that defines the run's identity;
// the output directory and wall time stay out so reruns hash identically.
std::string canonical_config_text(const RunConfig& rc);
std::uint64_t run_config_hash(const RunConfig& rc);

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct RunManifest {
  std::string experiment;
  std::uint64_t config_hash = 0;
  std::vector<std::string> artifacts;  // paths relative to the manifest
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;
  bool pass = false;  // every check passed
};

// manifest.txt in `dir`, written to a temporary name and renamed into place
// so readers never see a half-written file. Round-trips through the kv parser.
void write_manifest(const std::string& dir, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

void ensure_directory(const std::string& dir);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace deadcore

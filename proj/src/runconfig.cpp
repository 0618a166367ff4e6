#include "deadcore/runconfig.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "deadcore/kvfile.hpp"

namespace deadcore {

namespace {

void apply_solver_key(SolveConfig& s, const std::string& key, const std::string& value,
                      const std::string& ctx) {
  if (key == "max_iterations")
    s.max_iterations = kv_long(value, ctx);
  else if (key == "grad_tol")
    s.grad_tol = kv_double(value, ctx);
  else if (key == "nonmonotone_window")
    s.nonmonotone_window = static_cast<int>(kv_long(value, ctx));
  else if (key == "armijo_c")
    s.armijo_c = kv_double(value, ctx);
  else if (key == "eps_start")
    s.eps_start = kv_double(value, ctx);
  else if (key == "eps_end")
    s.eps_end = kv_double(value, ctx);
  else if (key == "eps_factor")
    s.eps_factor = kv_double(value, ctx);
  else if (key == "multistart")
    s.multistart = static_cast<int>(kv_long(value, ctx));
  else if (key == "seed")
    s.seed = static_cast<std::uint64_t>(kv_long(value, ctx));
  else if (key == "clearance_margin")
    s.clearance_margin = kv_double(value, ctx);
  else if (key == "census_residual_tol")
    s.census_residual_tol = kv_double(value, ctx);
  else if (key == "max_box_retries")
    s.max_box_retries = static_cast<int>(kv_long(value, ctx));
  else if (key == "workers")
    s.workers = static_cast<int>(kv_long(value, ctx));
  else
    throw std::runtime_error(ctx + ": unknown solver key '" + key + "'");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  RunConfig rc;
  rc.origin = origin;
  std::vector<std::pair<std::string, std::string>> shape_inline;
  for (const KvSection& sec : parse_kv_text(text, origin)) {
    const std::string ctx = origin + ":" + std::to_string(sec.line);
    if (sec.name == "experiment") {
      for (const auto& [k, v] : sec.entries) {
        if (k == "name")
          rc.experiment = v;
        else
          rc.extra[k] = v;
      }
    } else if (sec.name == "grid") {
      for (const auto& [k, v] : sec.entries) {
        if (k == "dim")
          rc.dim = static_cast<int>(kv_long(v, ctx));
        else if (k == "n")
          rc.n = static_cast<int>(kv_long(v, ctx));
        else if (k == "L")
          rc.L = kv_double(v, ctx);
        else
          throw std::runtime_error(ctx + ": unknown grid key '" + k + "'");
      }
    } else if (sec.name == "problem") {
      for (const auto& [k, v] : sec.entries) {
        if (k == "p")
          rc.p = kv_double(v, ctx);
        else if (k == "eps")
          rc.solve.eps_end = kv_double(v, ctx);
        else
          throw std::runtime_error(ctx + ": unknown problem key '" + k + "'");
      }
    } else if (sec.name == "shape") {
      for (const auto& [k, v] : sec.entries) {
        if (k == "file") {
          rc.shape_text = slurp(v);
          rc.shape = parse_shape_text(rc.shape_text, v);
          rc.has_shape = true;
        } else {
          shape_inline.emplace_back(k, v);
        }
      }
    } else if (sec.name == "solver") {
      for (const auto& [k, v] : sec.entries) apply_solver_key(rc.solve, k, v, ctx);
    } else if (sec.name == "output") {
      for (const auto& [k, v] : sec.entries) {
        if (k == "dir")
          rc.out_dir = v;
        else
          throw std::runtime_error(ctx + ": unknown output key '" + k + "'");
      }
    } else {
      throw std::runtime_error(ctx + ": unknown section [" + sec.name + "]");
    }
  }
  if (!shape_inline.empty()) {
    if (rc.has_shape)
      throw std::runtime_error(origin + ": give either a shape file or inline keys, not both");
    std::ostringstream ss;
    ss << "[domain]\ndim = " << rc.dim << "\n[shape]\n";
    for (const auto& [k, v] : shape_inline) ss << k << " = " << v << "\n";
    rc.shape_text = ss.str();
    rc.shape = parse_shape_text(rc.shape_text, origin + " (inline shape)");
    rc.has_shape = true;
  }
  if (rc.experiment.empty()) throw std::runtime_error(origin + ": missing experiment name");
  if (!(rc.p >= 1.0 && rc.p < 2.0))
    throw std::runtime_error(origin + ": p must lie in [1,2)");
  if (rc.dim != 1 && rc.dim != 2) throw std::runtime_error(origin + ": dim must be 1 or 2");
  if (rc.n < 3) throw std::runtime_error(origin + ": grid needs at least 3 nodes per axis");
  if (!(rc.L > 0.0)) throw std::runtime_error(origin + ": box half-width must be positive");
  const long m = rc.n - 1;
  if ((m & (m - 1)) != 0)
    std::fprintf(stderr, "warning: %s: n-1 = %ld is not a power of two; dyadic sizes keep node "
                         "coordinates exact\n",
                 origin.c_str(), m);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(slurp(path), path);
}

std::string canonical_config_text(const RunConfig& rc) {
  std::ostringstream ss;
  ss.precision(17);
  ss << "experiment=" << rc.experiment << "\n";
  ss << "dim=" << rc.dim << " n=" << rc.n << " L=" << rc.L << " p=" << rc.p << "\n";
  ss << "shape=" << (rc.has_shape ? rc.shape_text : std::string("(none)")) << "\n";
  ss << describe(rc.solve) << "\n";
  for (const auto& [k, v] : rc.extra) ss << k << "=" << v << "\n";
  return ss.str();
}

std::uint64_t run_config_hash(const RunConfig& rc) { return fnv1a(canonical_config_text(rc)); }

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + dir + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("short write on '" + path + "'");
}

void write_manifest(const std::string& dir, const RunManifest& m) {
  ensure_directory(dir);
  std::ostringstream ss;
  ss.precision(17);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, m.config_hash);
  ss << "[manifest]\n";
  ss << "experiment = " << m.experiment << "\n";
  ss << "config_hash = " << hash << "\n";
  ss << "pass = " << (m.pass ? "true" : "false") << "\n";
  ss << "wall_seconds = " << m.wall_seconds << "\n";
  if (!m.artifacts.empty()) {
    ss << "\n[artifacts]\n";
    for (const std::string& a : m.artifacts) ss << "file = " << a << "\n";
  }
  for (const CheckResult& c : m.checks) {
    ss << "\n[check]\n";
    ss << "name = " << c.name << "\n";
    ss << "pass = " << (c.pass ? "true" : "false") << "\n";
    ss << "observed = " << c.observed << "\n";
    ss << "tolerance = " << c.tolerance << "\n";
    if (!c.note.empty()) ss << "note = " << c.note << "\n";
  }
  const std::string final_path = dir + "/manifest.txt";
  const std::string tmp_path = final_path + ".tmp";
  write_text_file(tmp_path, ss.str());
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) throw std::runtime_error("cannot move manifest into place: " + ec.message());
}

RunManifest read_manifest(const std::string& path) {
  RunManifest m;
  bool seen = false;
  for (const KvSection& sec : load_kv_file(path)) {
    const std::string ctx = path + ":" + std::to_string(sec.line);
    if (sec.name == "manifest") {
      seen = true;
      for (const auto& [k, v] : sec.entries) {
        if (k == "experiment")
          m.experiment = v;
        else if (k == "config_hash")
          m.config_hash = std::strtoull(v.c_str(), nullptr, 16);
        else if (k == "pass")
          m.pass = v == "true";
        else if (k == "wall_seconds")
          m.wall_seconds = kv_double(v, ctx);
      }
    } else if (sec.name == "artifacts") {
      for (const auto& [k, v] : sec.entries)
        if (k == "file") m.artifacts.push_back(v);
    } else if (sec.name == "check") {
      CheckResult c;
      for (const auto& [k, v] : sec.entries) {
        if (k == "name")
          c.name = v;
        else if (k == "pass")
          c.pass = v == "true";
        else if (k == "observed")
          c.observed = kv_double(v, ctx);
        else if (k == "tolerance")
          c.tolerance = kv_double(v, ctx);
        else if (k == "note")
          c.note = v;
      }
      m.checks.push_back(std::move(c));
    }
  }
  if (!seen) throw std::runtime_error(path + ": missing [manifest] section");
  return m;
}

}  // namespace deadcore

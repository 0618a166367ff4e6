// Command-line front end: every subcommand builds a RunConfig, hands it to the
// experiment registry, prints the manifest checks, and exits 0 only when all
// of them held. Exit 1 means the run completed with a failing check, exit 2
// means it did not complete.

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "deadcore/geometry.hpp"
#include "deadcore/overdetermined.hpp"
#include "deadcore/registry.hpp"
#include "deadcore/runconfig.hpp"

namespace {

using namespace deadcore;

std::string ball_config(const std::string& experiment, int dim, int n, double L, double p) {
  std::ostringstream os;
  os << "[experiment]\nname = " << experiment << "\n\n[grid]\ndim = " << dim << "\nn = " << n
     << "\nL = " << L << "\n\n[problem]\np = " << p
     << "\n\n[shape]\ntype = ball\ncenter = " << (dim == 2 ? "0 0" : "0") << "\nradius = 1\n";
  return os.str();
}

struct Overrides {
  std::string out;
  long seed = 0;
  bool has_seed = false;
};

void apply_overrides(RunConfig& rc, const Overrides& ov) {
  if (!ov.out.empty()) rc.out_dir = ov.out;
  if (ov.has_seed) rc.solve.seed = static_cast<unsigned long>(ov.seed);
  if (const char* env = std::getenv("DEADCORE_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) rc.solve.workers = w;
  }
}

RunConfig config_for(const std::string& path, const std::string& fallback_text, const Overrides& ov) {
  RunConfig rc = path.empty() ? parse_run_config(fallback_text, "(builtin default)") : load_run_config(path);
  apply_overrides(rc, ov);
  return rc;
}

void require_experiment(const RunConfig& rc, const std::string& expected) {
  if (rc.experiment != expected)
    throw std::runtime_error("config names experiment '" + rc.experiment + "' but this command runs '" +
                             expected + "'");
}

int report(const RunManifest& m, const std::string& out_dir) {
  for (const CheckResult& c : m.checks) {
    std::printf("  %-32s %s  observed %.6g  tol %.6g\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                c.observed, c.tolerance);
    if (!c.pass && !c.note.empty()) std::printf("    note: %s\n", c.note.c_str());
  }
  std::printf("%s  %s (%.1f s)  manifest %s/manifest.txt\n", m.pass ? "PASS" : "FAIL",
              m.experiment.c_str(), m.wall_seconds, out_dir.c_str());
  return m.pass ? 0 : 1;
}

int dispatch(const RunConfig& rc) { return report(run_experiment(rc), rc.out_dir); }

int suite_workers() {
  if (const char* env = std::getenv("DEADCORE_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dead-core laboratory for the indefinite sublinear inclusion problem"};
  app.require_subcommand(1);

  std::string config_path, shape_path, tier = "smoke", kind;
  Overrides ov;
  int N = 2, grid_n = 0;
  double p = 1.0, r_omega = 1.0, box_L = 0.0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "sectioned key/value run configuration");
    if (config_required) c->required();
    sub->add_option("--out", ov.out, "output directory (overrides the config)");
    auto* s = sub->add_option("--seed", ov.seed, "solver seed (overrides the config)");
    sub->callback([&, s]() { ov.has_seed = s->count() > 0; });
    return sub;
  };

  CLI::App* solve = add_common(app.add_subcommand("solve", "run the experiment named in the config"), true);
  CLI::App* sweep = add_common(app.add_subcommand("sweep", "exponent sweep with warm starts"), false);

  CLI::App* nodal = app.add_subcommand("nodal", "sign-changing critical points");
  nodal->require_subcommand(1);
  for (const char* k : {"mountain-pass", "least-energy", "equivariant", "dumbbell", "compare"})
    add_common(nodal->add_subcommand(k, ""), false);

  CLI::App* radial = app.add_subcommand("radial", "radial shooting and closed forms");
  radial->require_subcommand(1);
  for (const char* k : {"shoot", "explicit", "verify"}) {
    CLI::App* sub = radial->add_subcommand(k, "");
    sub->add_option("--N", N, "space dimension of the radial operator");
    sub->add_option("--p", p, "exponent in [1,2)");
    sub->add_option("--R", r_omega, "inclusion ball radius");
    sub->add_option("--out", ov.out, "output directory");
  }

  CLI::App* multiplicity =
      add_common(app.add_subcommand("multiplicity", "component census on a disconnected domain"), false);
  CLI::App* outer = app.add_subcommand("outer-set", "recover the coincidence set around an inclusion");
  outer->add_option("--shape", shape_path, "shape file for the inclusion D");
  outer->add_option("--config", config_path, "full run configuration (alternative to --shape)");
  outer->add_option("--out", ov.out, "output directory");
  outer->add_option("--n", grid_n, "grid nodes per axis");
  outer->add_option("--L", box_L, "computational box half-width");
  CLI::App* inner = app.add_subcommand("inner-set", "status of the reverse inclusion problem");
  CLI::App* lambda1 = add_common(app.add_subcommand("lambda1", "principal indefinite eigenvalue"), false);

  CLI::App* suite = app.add_subcommand("suite", "curated experiment batteries");
  suite->add_option("--tier", tier, "smoke, desk, or full")->required();
  suite->add_option("--out", ov.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return dispatch(config_for(config_path, "", ov));
    if (*sweep) {
      std::ostringstream os;
      os << "[experiment]\nname = sweep-p\np_list = 1.0 1.2 1.4 1.6 1.8\n\n[grid]\ndim = 1\nn = 257\nL = 4"
         << "\n\n[shape]\ntype = ball\ncenter = 0\nradius = 1\n";
      RunConfig rc = config_for(config_path, os.str(), ov);
      require_experiment(rc, "sweep-p");
      return dispatch(rc);
    }
    if (*nodal) {
      kind = nodal->get_subcommands().front()->get_name();
      std::string expected = "nodal." + kind;
      std::string fb;
      if (kind == "dumbbell")
        fb = "[experiment]\nname = nodal.dumbbell\ndeltas = 0.4 0.2 0.1\n\n[grid]\ndim = 2\nn = 257\nL = 4"
             "\n\n[problem]\np = 1.5\n";
      else
        fb = ball_config(expected, 1, 257, 3.0, 1.0);
      RunConfig rc = config_for(config_path, fb, ov);
      require_experiment(rc, expected);
      return dispatch(rc);
    }
    if (*radial) {
      kind = radial->get_subcommands().front()->get_name();
      RunConfig rc;
      rc.experiment = "radial." + kind;
      rc.dim = 1;
      rc.p = p;
      rc.extra["N"] = std::to_string(N);
      {
        std::ostringstream os;
        os.precision(17);
        os << r_omega;
        rc.extra["r_omega"] = os.str();
      }
      rc.out_dir = "out";
      rc.origin = "(command line)";
      apply_overrides(rc, ov);
      return dispatch(rc);
    }
    if (*multiplicity) {
      std::string fb =
          "[experiment]\nname = multiplicity\n\n[grid]\ndim = 1\nn = 1025\nL = 8\n\n[shape]\ntype = ball\n"
          "center = -5\nradius = 1\n\n[shape]\ntype = ball\ncenter = 5\nradius = 1\n";
      RunConfig rc = config_for(config_path, fb, ov);
      require_experiment(rc, "multiplicity");
      return dispatch(rc);
    }
    if (*outer) {
      RunConfig rc;
      if (!config_path.empty()) {
        rc = load_run_config(config_path);
        require_experiment(rc, "outer-set");
      } else {
        if (shape_path.empty()) throw std::runtime_error("outer-set needs --shape or --config");
        rc.experiment = "outer-set";
        rc.shape = load_shape(shape_path);
        rc.has_shape = true;
        rc.shape_text = "file: " + shape_path;
        rc.dim = rc.shape.dim;
        rc.n = rc.dim == 1 ? 513 : 385;
        rc.L = 3.0;
        rc.origin = "(command line)";
      }
      if (grid_n > 0) rc.n = grid_n;
      if (box_L > 0) rc.L = box_L;
      apply_overrides(rc, ov);
      return dispatch(rc);
    }
    if (*inner) {
      std::printf("%s\n", inner_set_status().c_str());
      return 0;
    }
    if (*lambda1) {
      RunConfig rc = config_for(config_path, ball_config("lambda1", 1, 513, 4.0, 1.0), ov);
      require_experiment(rc, "lambda1");
      return dispatch(rc);
    }
    if (*suite) {
      std::string out = ov.out.empty() ? "out" : ov.out;
      RunManifest m = run_suite(tier, out, suite_workers());
      return report(m, out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

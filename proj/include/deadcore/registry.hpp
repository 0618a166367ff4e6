#pragma once

#include <string>
#include <vector>

#include "deadcore/runconfig.hpp"

namespace deadcore {

// Names accepted by run_experiment, in dispatch order.
std::vector<std::string> experiment_names();
bool has_experiment(const std::string& name);

// Runs the named experiment, writes its artifacts and manifest.txt under
// rc.out_dir, and returns the manifest. Checks never throw; hard failures
// (bad config, non-convergence) propagate as exceptions before any manifest
// is written.
RunManifest run_experiment(const RunConfig& rc);

// smoke: radial closed forms and 1d identities, seconds. desk: one
// representative run of every experiment at working resolution, minutes.
// full: desk plus fine grids and the extended corridor sweep.
RunManifest run_suite(const std::string& tier, const std::string& out_dir, int workers);

}  // namespace deadcore

#ifndef HAWKES_EXPERIMENT_HPP
#define HAWKES_EXPERIMENT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/config.hpp"

namespace hawkes {

// Raised when an output file cannot be created or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Runs the configured experiment and writes its CSV artifacts plus a
// `manifest` file (config hash, seed, version) into config.out_dir.
// Returns the paths of the files written. Identical config and seed
// produce byte-identical files.
//
// dump_paths > 0 additionally writes that many simulated paths at the
// largest horizon as `path_<i>.csv` with columns
// `event_index,time,mark,intensity_pre`.
std::vector<std::string> run_experiment(const ExperimentConfig& config, int dump_paths = 0);

// FNV-1a 64-bit hash used for the manifest config fingerprint.
std::uint64_t fnv1a64(const std::string& text);

// Library version recorded in manifests.
extern const char* const kVersion;

}  // namespace hawkes

#endif

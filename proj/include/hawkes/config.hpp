#ifndef HAWKES_CONFIG_HPP
#define HAWKES_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/kernel.hpp"
#include "hawkes/marks.hpp"
#include "hawkes/wasserstein.hpp"

namespace hawkes {

enum class ExperimentKind { Moments, Bound, Distance, Rate, IbpCheck, All };

// Raised for any malformed or invalid configuration; the message carries
// the offending line number where one applies.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    // [experiment]
    ExperimentKind kind = ExperimentKind::All;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    Statistic statistic = Statistic::F;

    // [model]
    std::string kernel_name = "exponential";
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 1.0;
    std::string table_path;

    // [marks]
    std::string mark_name = "point_one";
    double two_point_a = 0.0, two_point_b = 0.0, two_point_p = 0.5;
    double gaussian_mean = 0.0, gaussian_sd = 1.0;
    double lognormal_log_mean = 0.0, lognormal_log_sd = 1.0;

    // [budget]
    std::size_t n_paths = 5000;
    int k_grid = 64;
    std::vector<double> T_grid = {25.0, 50.0, 100.0, 200.0, 400.0};
    int workers = 0;  // 0 = machine parallelism

    // Raw text the config was parsed from, for the manifest hash.
    std::string source_text;

    // Construct the validated model objects (may throw ConfigError).
    Kernel make_kernel() const;
    MarkDistribution make_marks() const;
};

// Parses the line-oriented `[section]` / `key = value` format. Unknown
// keys, missing required keys, and constraint violations raise ConfigError
// with the line number.
ExperimentConfig parse_config(const std::string& text);

// Reads the file and parses it; file errors also raise ConfigError.
ExperimentConfig load_config(const std::string& path);

}  // namespace hawkes

#endif

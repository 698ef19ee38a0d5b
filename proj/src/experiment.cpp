#include "hawkes/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hawkes/coupled.hpp"
#include "hawkes/moments.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stein.hpp"
#include "hawkes/wasserstein.hpp"

namespace hawkes {

const char* const kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path.string()), out_(path) {
        if (!out_) throw IoError("cannot open output file '" + path_ + "'");
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw IoError("write failed on '" + path_ + "'");
    }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
};

// Disjoint stream blocks per report kind (each block spans 2^48 streams).
constexpr std::uint64_t kBoundBlock = 100;
constexpr std::uint64_t kDistanceBlock = 300;
constexpr std::uint64_t kIbpBlock = 400;
constexpr std::uint64_t kDumpBlock = 500;

void write_moments(const ExperimentConfig& cfg, const Kernel& kernel,
                   const std::filesystem::path& dir, std::vector<std::string>& files) {
    CsvWriter csv(dir / "moments.csv");
    csv.row({"t", "mean_intensity", "mean_count", "second_moment"});
    std::vector<MomentReport> ode;
    const bool markov = kernel.type() == KernelType::Exponential ||
                        kernel.type() == KernelType::Erlang;
    if (markov) ode = second_moment_ode(kernel, cfg.mu, cfg.T_grid);
    for (std::size_t i = 0; i < cfg.T_grid.size(); ++i) {
        const double t = cfg.T_grid[i];
        double second = std::nan("");
        if (markov) second = ode[i].second_moment_intensity;
        else if (kernel.type() == KernelType::Zero) second = cfg.mu * cfg.mu;
        csv.row({fmt(t), fmt(expected_intensity(kernel, cfg.mu, t)),
                 fmt(expected_count(kernel, cfg.mu, t)), fmt(second)});
    }
    files.push_back(csv.path());
}

void write_bound(const ExperimentConfig& cfg, const Kernel& kernel,
                 const MarkDistribution& marks, const std::filesystem::path& dir,
                 std::vector<std::string>& files) {
    CsvWriter csv(dir / "bound.csv");
    csv.row({"T", "a11", "a12", "a12_se", "a13", "a13_se", "a21", "a22", "a22_se", "total",
             "n_outer", "k_grid", "seed"});
    for (std::size_t ti = 0; ti < cfg.T_grid.size(); ++ti) {
        RandomState rs{cfg.seed, derive_stream(kBoundBlock + ti, 0, 0)};
        BoundReport r = total_bound(kernel, cfg.mu, marks, cfg.T_grid[ti], cfg.n_paths,
                                    cfg.k_grid, rs, cfg.workers);
        csv.row({fmt(r.T), fmt(r.a11), fmt(r.a12), fmt(r.a12_se), fmt(r.a13), fmt(r.a13_se),
                 fmt(r.a21), fmt(r.a22), fmt(r.a22_se), fmt(r.total),
                 std::to_string(r.n_outer), std::to_string(r.k_grid),
                 std::to_string(r.seed)});
    }
    files.push_back(csv.path());
}

DistanceSeries compute_distance(const ExperimentConfig& cfg, const Kernel& kernel,
                                const MarkDistribution& marks) {
    RandomState rs{cfg.seed, derive_stream(kDistanceBlock, 0, 0)};
    return distance_curve(kernel, cfg.mu, marks, cfg.T_grid, cfg.n_paths, cfg.statistic, rs,
                          0.0, cfg.workers);
}

void write_distance(const DistanceSeries& series, const std::filesystem::path& dir,
                    std::vector<std::string>& files) {
    CsvWriter csv(dir / "distance.csv");
    csv.row({"T", "n", "d_hat", "se_boot", "gamma2", "statistic"});
    for (const auto& e : series.entries)
        csv.row({fmt(e.T), std::to_string(e.n), fmt(e.d_hat), fmt(e.se_boot),
                 fmt(series.gamma2), statistic_name(series.statistic)});
    files.push_back(csv.path());
}

void write_ratefit(const DistanceSeries& series, const std::filesystem::path& dir,
                   std::vector<std::string>& files) {
    RateFit fit = fit_rate(series);
    CsvWriter csv(dir / "ratefit.csv");
    csv.row({"slope", "intercept", "r_squared"});
    csv.row({fmt(fit.slope), fmt(fit.intercept), fmt(fit.r_squared)});
    files.push_back(csv.path());
}

void write_ibp(const ExperimentConfig& cfg, const Kernel& kernel,
               const MarkDistribution& marks, const std::filesystem::path& dir,
               std::vector<std::string>& files) {
    // E[F_T^2] = theta^2 E[H_T]/T at the first horizon of the grid.
    const double T = cfg.T_grid.front();
    const std::size_t n = cfg.n_paths;
    std::vector<double> f2(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            RandomState rs{cfg.seed, derive_stream(kIbpBlock, i, 0)};
            HawkesPath path = simulate_hawkes(kernel, cfg.mu, marks, T, rs);
            const double f = statistic_F(path, kernel, cfg.mu, marks);
            f2[i] = f * f;
        },
        cfg.workers);
    const double lhs = std::accumulate(f2.begin(), f2.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : f2) ss += (v - lhs) * (v - lhs);
    const double se = std::sqrt(ss / (static_cast<double>(n) * (static_cast<double>(n) - 1.0)));
    const double rhs = marks.second_moment() * expected_count(kernel, cfg.mu, T) / T;
    CsvWriter csv(dir / "ibp.csv");
    csv.row({"lhs", "rhs", "combined_se", "pass"});
    csv.row({fmt(lhs), fmt(rhs), fmt(se), std::fabs(lhs - rhs) <= 4.0 * se ? "1" : "0"});
    files.push_back(csv.path());
}

void write_path_dumps(const ExperimentConfig& cfg, const Kernel& kernel,
                      const MarkDistribution& marks, const std::filesystem::path& dir,
                      int count, std::vector<std::string>& files) {
    const double T = cfg.T_grid.back();
    for (int i = 0; i < count; ++i) {
        RandomState rs{cfg.seed, derive_stream(kDumpBlock, static_cast<std::size_t>(i), 0)};
        HawkesPath path = simulate_hawkes(kernel, cfg.mu, marks, T, rs);
        CsvWriter csv(dir / ("path_" + std::to_string(i) + ".csv"));
        csv.row({"event_index", "time", "mark", "intensity_pre"});
        for (std::size_t j = 0; j < path.event_times.size(); ++j)
            csv.row({std::to_string(j), fmt(path.event_times[j]), fmt(path.marks[j]),
                     fmt(path.intensity_pre[j])});
        files.push_back(csv.path());
    }
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, int dump_paths) {
    const Kernel kernel = cfg.make_kernel();
    const MarkDistribution marks = cfg.make_marks();
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");

    std::vector<std::string> files;
    const bool all = cfg.kind == ExperimentKind::All;
    if (all || cfg.kind == ExperimentKind::Moments) write_moments(cfg, kernel, dir, files);
    if (all || cfg.kind == ExperimentKind::Bound) write_bound(cfg, kernel, marks, dir, files);
    if (all || cfg.kind == ExperimentKind::Distance || cfg.kind == ExperimentKind::Rate) {
        DistanceSeries series = compute_distance(cfg, kernel, marks);
        write_distance(series, dir, files);
        if (cfg.kind == ExperimentKind::Rate || (all && series.entries.size() >= 4))
            write_ratefit(series, dir, files);
    }
    if (all || cfg.kind == ExperimentKind::IbpCheck) write_ibp(cfg, kernel, marks, dir, files);
    if (dump_paths > 0) write_path_dumps(cfg, kernel, marks, dir, dump_paths, files);

    {
        std::ofstream manifest(dir / "manifest");
        if (!manifest) throw IoError("cannot open manifest in '" + cfg.out_dir + "'");
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(cfg.source_text)));
        manifest << "config_hash=" << hash << '\n'
                 << "seed=" << cfg.seed << '\n'
                 << "version=" << kVersion << '\n';
        if (!manifest) throw IoError("write failed on manifest");
        files.push_back((dir / "manifest").string());
    }
    return files;
}

}  // namespace hawkes

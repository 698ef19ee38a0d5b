#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hawkes/config.hpp"
#include "hawkes/experiment.hpp"

using namespace hawkes;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string small_config(const std::string& out_dir, std::uint64_t seed) {
    return "[experiment]\n"
           "kind = all\n"
           "seed = " + std::to_string(seed) + "\n"
           "out_dir = " + out_dir + "\n"
           "[model]\n"
           "kernel = exponential\n"
           "alpha = 1.0\n"
           "beta = 2.0\n"
           "[budget]\n"
           "n_paths = 500\n"
           "k_grid = 8\n"
           "T_grid = 4,9\n"
           "workers = 1\n";
}

struct TempDir {
    fs::path dir;
    explicit TempDir(const std::string& name) : dir(fs::temp_directory_path() / name) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
};

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("a full run writes every artifact and is byte reproducible") {
    TempDir d1("hawkes_exp_a"), d2("hawkes_exp_b");
    auto cfg1 = parse_config(small_config(d1.dir.string(), 7));
    auto files1 = run_experiment(cfg1);
    std::vector<std::string> names;
    for (const auto& f : files1) names.push_back(fs::path(f).filename().string());
    for (const char* expect : {"moments.csv", "bound.csv", "distance.csv", "ibp.csv",
                               "manifest"})
        CHECK(std::find(names.begin(), names.end(), expect) != names.end());
    // Only two horizons, so no rate fit is attempted.
    CHECK(std::find(names.begin(), names.end(), "ratefit.csv") == names.end());

    auto cfg2 = parse_config(small_config(d2.dir.string(), 7));
    auto files2 = run_experiment(cfg2);
    REQUIRE(files1.size() == files2.size());
    for (std::size_t i = 0; i < files1.size(); ++i) {
        // The manifest hash covers the raw config text, which includes the
        // differing out_dir, so only the CSVs are compared byte for byte.
        if (fs::path(files1[i]).filename() == "manifest") continue;
        CHECK(slurp(files1[i]) == slurp(files2[i]));
    }
}

TEST_CASE("changing the seed changes monte carlo columns but not exact ones") {
    TempDir d1("hawkes_exp_c"), d2("hawkes_exp_d");
    auto f1 = run_experiment(parse_config(small_config(d1.dir.string(), 7)));
    auto f2 = run_experiment(parse_config(small_config(d2.dir.string(), 8)));
    const std::string b1 = slurp((d1.dir / "bound.csv").string());
    const std::string b2 = slurp((d2.dir / "bound.csv").string());
    CHECK(b1 != b2);
    // moments.csv is fully deterministic (ODE + closed forms).
    CHECK(slurp((d1.dir / "moments.csv").string()) ==
          slurp((d2.dir / "moments.csv").string()));
    // Exact a11 column (second field) must agree line by line.
    std::istringstream s1(b1), s2(b2);
    std::string l1, l2;
    while (std::getline(s1, l1) && std::getline(s2, l2)) {
        auto field = [](const std::string& line, int idx) {
            std::istringstream ls(line);
            std::string tok;
            for (int i = 0; i <= idx; ++i) std::getline(ls, tok, ',');
            return tok;
        };
        CHECK(field(l1, 0) == field(l2, 0));  // T
        CHECK(field(l1, 1) == field(l2, 1));  // a11
    }
}

TEST_CASE("the manifest records the config hash, seed and version") {
    TempDir d("hawkes_exp_e");
    auto cfg = parse_config(small_config(d.dir.string(), 7));
    run_experiment(cfg);
    const std::string m = slurp((d.dir / "manifest").string());
    std::ostringstream expect;
    expect << std::hex << fnv1a64(cfg.source_text);
    CHECK(m.find("config_hash=" + expect.str()) != std::string::npos);
    CHECK(m.find("seed=7") != std::string::npos);
    CHECK(m.find(std::string("version=") + kVersion) != std::string::npos);
}

TEST_CASE("csv headers match the documented schemas") {
    TempDir d("hawkes_exp_f");
    run_experiment(parse_config(small_config(d.dir.string(), 7)));
    auto first_line = [&](const char* name) {
        std::istringstream in(slurp((d.dir / name).string()));
        std::string line;
        std::getline(in, line);
        return line;
    };
    CHECK(first_line("moments.csv") == "t,mean_intensity,mean_count,second_moment");
    CHECK(first_line("bound.csv") ==
          "T,a11,a12,a12_se,a13,a13_se,a21,a22,a22_se,total,n_outer,k_grid,seed");
    CHECK(first_line("distance.csv") == "T,n,d_hat,se_boot,gamma2,statistic");
    CHECK(first_line("ibp.csv") == "lhs,rhs,combined_se,pass");
}

TEST_CASE("the integration by parts check passes on a healthy model") {
    TempDir d("hawkes_exp_g");
    std::string text = small_config(d.dir.string(), 7);
    text.replace(text.find("kind = all"), 10, "kind = ibp_check");
    run_experiment(parse_config(text));
    std::istringstream in(slurp((d.dir / "ibp.csv").string()));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(row.substr(row.rfind(',') + 1) == "1");
}

TEST_CASE("path dumps contain one csv per requested path") {
    TempDir d("hawkes_exp_h");
    std::string text = small_config(d.dir.string(), 7);
    text.replace(text.find("kind = all"), 10, "kind = moments");
    auto files = run_experiment(parse_config(text), 2);
    CHECK(fs::exists(d.dir / "path_0.csv"));
    CHECK(fs::exists(d.dir / "path_1.csv"));
    CHECK(!fs::exists(d.dir / "path_2.csv"));
    std::istringstream in(slurp((d.dir / "path_0.csv").string()));
    std::string header;
    std::getline(in, header);
    CHECK(header == "event_index,time,mark,intensity_pre");
}

TEST_CASE("an unwritable output directory raises an io error") {
    auto cfg = parse_config(small_config("/proc/definitely/not/writable", 7));
    CHECK_THROWS_AS(run_experiment(cfg), IoError);
}

TEST_CASE("rate runs with enough horizons emit the fit") {
    TempDir d("hawkes_exp_i");
    std::string text =
        "[experiment]\nkind = rate\nseed = 5\nout_dir = " + d.dir.string() + "\n" +
        "[model]\nkernel = exponential\nalpha = 1.0\nbeta = 2.0\n" +
        "[budget]\nn_paths = 500\nT_grid = 4,8,16,32\nworkers = 1\n";
    run_experiment(parse_config(text));
    CHECK(fs::exists(d.dir / "ratefit.csv"));
    std::istringstream in(slurp((d.dir / "ratefit.csv").string()));
    std::string header, row;
    std::getline(in, header);
    CHECK(header == "slope,intercept,r_squared");
    std::getline(in, row);
    CHECK(!row.empty());
}

}  // TEST_SUITE

#include "hawkes/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hawkes {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) fail(line, key + ": trailing characters in number '" + value + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, key + ": expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) fail(line, key + ": trailing characters in integer '" + value + "'");
        return static_cast<std::uint64_t>(v);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, key + ": expected a nonnegative integer, got '" + value + "'");
    }
}

std::vector<double> parse_list(int line, const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, key + ": empty list element");
        out.push_back(parse_number(line, key, item));
    }
    if (out.empty()) fail(line, key + ": empty list");
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.source_text = text;

    bool saw_kernel = false, saw_alpha = false, saw_beta = false, saw_table = false;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "experiment" && section != "model" && section != "marks" &&
                section != "budget")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (value.empty()) fail(line, key + ": empty value");
        if (section.empty()) fail(line, "key '" + key + "' outside any [section]");

        if (section == "experiment") {
            if (key == "kind") {
                if (value == "moments") cfg.kind = ExperimentKind::Moments;
                else if (value == "bound") cfg.kind = ExperimentKind::Bound;
                else if (value == "distance") cfg.kind = ExperimentKind::Distance;
                else if (value == "rate") cfg.kind = ExperimentKind::Rate;
                else if (value == "ibp_check") cfg.kind = ExperimentKind::IbpCheck;
                else if (value == "all") cfg.kind = ExperimentKind::All;
                else fail(line, "kind: unknown experiment kind '" + value + "'");
            } else if (key == "seed") {
                cfg.seed = parse_u64(line, key, value);
            } else if (key == "out_dir") {
                cfg.out_dir = value;
            } else if (key == "statistic") {
                if (value == "F") cfg.statistic = Statistic::F;
                else if (value == "Y") cfg.statistic = Statistic::Y;
                else fail(line, "statistic: expected F or Y, got '" + value + "'");
            } else {
                fail(line, "unknown key '" + key + "' in [experiment]");
            }
        } else if (section == "model") {
            if (key == "kernel") {
                if (value != "exponential" && value != "erlang" && value != "zero" &&
                    value != "tabulated")
                    fail(line, "kernel: unknown kernel '" + value + "'");
                cfg.kernel_name = value;
                saw_kernel = true;
            } else if (key == "alpha") {
                cfg.alpha = parse_number(line, key, value);
                saw_alpha = true;
            } else if (key == "beta") {
                cfg.beta = parse_number(line, key, value);
                saw_beta = true;
            } else if (key == "mu") {
                cfg.mu = parse_number(line, key, value);
                if (!(cfg.mu > 0.0)) fail(line, "mu: must be positive");
            } else if (key == "table_path") {
                cfg.table_path = value;
                saw_table = true;
            } else {
                fail(line, "unknown key '" + key + "' in [model]");
            }
        } else if (section == "marks") {
            if (key == "dist") {
                if (value != "point_one" && value != "two_point" && value != "gaussian" &&
                    value != "lognormal")
                    fail(line, "dist: unknown mark distribution '" + value + "'");
                cfg.mark_name = value;
            } else if (key == "a") {
                cfg.two_point_a = parse_number(line, key, value);
            } else if (key == "b") {
                cfg.two_point_b = parse_number(line, key, value);
            } else if (key == "p") {
                cfg.two_point_p = parse_number(line, key, value);
            } else if (key == "mean") {
                cfg.gaussian_mean = parse_number(line, key, value);
            } else if (key == "sd") {
                cfg.gaussian_sd = parse_number(line, key, value);
            } else if (key == "log_mean") {
                cfg.lognormal_log_mean = parse_number(line, key, value);
            } else if (key == "log_sd") {
                cfg.lognormal_log_sd = parse_number(line, key, value);
            } else {
                fail(line, "unknown key '" + key + "' in [marks]");
            }
        } else {  // budget
            if (key == "n_paths") {
                cfg.n_paths = static_cast<std::size_t>(parse_u64(line, key, value));
                if (cfg.n_paths < 2) fail(line, "n_paths: must be >= 2");
            } else if (key == "k_grid") {
                cfg.k_grid = static_cast<int>(parse_u64(line, key, value));
                if (cfg.k_grid < 2) fail(line, "k_grid: must be >= 2");
            } else if (key == "T_grid") {
                cfg.T_grid = parse_list(line, key, value);
                for (std::size_t i = 0; i < cfg.T_grid.size(); ++i) {
                    if (!(cfg.T_grid[i] > 0.0)) fail(line, "T_grid: horizons must be positive");
                    if (i > 0 && !(cfg.T_grid[i] > cfg.T_grid[i - 1]))
                        fail(line, "T_grid: must be strictly increasing");
                }
            } else if (key == "workers") {
                cfg.workers = static_cast<int>(parse_u64(line, key, value));
            } else {
                fail(line, "unknown key '" + key + "' in [budget]");
            }
        }
    }

    if (!saw_kernel) throw ConfigError("config: missing required key 'kernel' in [model]");
    if (cfg.kernel_name == "exponential" || cfg.kernel_name == "erlang") {
        if (!saw_alpha || !saw_beta)
            throw ConfigError("config: kernel '" + cfg.kernel_name +
                              "' requires alpha and beta in [model]");
    }
    if (cfg.kernel_name == "tabulated" && !saw_table)
        throw ConfigError("config: kernel 'tabulated' requires table_path in [model]");

    // Surface model-constraint violations (e.g. stability) at parse time.
    cfg.make_kernel();
    cfg.make_marks();
    return cfg;
}

Kernel ExperimentConfig::make_kernel() const {
    try {
        if (kernel_name == "zero") return Kernel::zero();
        if (kernel_name == "exponential") return Kernel::exponential(alpha, beta);
        if (kernel_name == "erlang") return Kernel::erlang(alpha, beta);
        // Tabulated: two-column CSV "t,value", optional header line.
        std::ifstream in(table_path);
        if (!in) throw ConfigError("config: cannot open table_path '" + table_path + "'");
        std::vector<double> grid, values;
        std::string row;
        int line = 0;
        while (std::getline(in, row)) {
            ++line;
            row = trim(row);
            if (row.empty() || row[0] == '#') continue;
            const auto comma = row.find(',');
            if (comma == std::string::npos)
                throw ConfigError(table_path + " line " + std::to_string(line) +
                                  ": expected 't,value'");
            try {
                const double t = std::stod(row.substr(0, comma));
                const double v = std::stod(row.substr(comma + 1));
                grid.push_back(t);
                values.push_back(v);
            } catch (const std::exception&) {
                if (line == 1 && grid.empty()) continue;  // header row
                throw ConfigError(table_path + " line " + std::to_string(line) +
                                  ": expected numeric 't,value'");
            }
        }
        return Kernel::tabulated(std::move(grid), std::move(values));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

MarkDistribution ExperimentConfig::make_marks() const {
    try {
        if (mark_name == "point_one") return MarkDistribution::point_mass_one();
        if (mark_name == "two_point")
            return MarkDistribution::two_point(two_point_a, two_point_b, two_point_p);
        if (mark_name == "gaussian")
            return MarkDistribution::gaussian(gaussian_mean, gaussian_sd);
        return MarkDistribution::lognormal(lognormal_log_mean, lognormal_log_sd);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace hawkes

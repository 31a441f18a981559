#include "binann/sweep_config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace binann {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::uint64_t parse_u64(const std::string& token, const std::string& context) {
    std::size_t consumed = 0;
    std::uint64_t value = 0;
    try {
        value = std::stoull(token, &consumed);
    } catch (const std::exception&) {
        throw ConfigError("expected an integer for " + context + ", got '" + token + "'");
    }
    if (consumed != token.size())
        throw ConfigError("trailing characters after integer in " + context + ": '" + token + "'");
    return value;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& value, const std::string& context) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) throw ConfigError("empty entry in list for " + context);
        out.push_back(parse_u64(token, context));
    }
    if (out.empty()) throw ConfigError("empty value list for " + context);
    return out;
}

const std::map<std::string, std::vector<std::string>>& axes_by_method() {
    static const std::map<std::string, std::vector<std::string>> axes = {
        {"rbt", {"trees", "depth", "bits"}},
        {"lsh", {"tables", "hash_length"}},
        {"uniform-lsh", {"tables", "hash_length"}},
        {"multiprobe-lsh", {"tables", "hash_length", "probes"}},
        {"oracle", {}},
    };
    return axes;
}

std::vector<std::uint64_t> default_axis(const std::string& method, const std::string& axis) {
    if (method == "rbt") {
        if (axis == "trees") return {1, 3, 6, 9, 12};
        if (axis == "depth") return {20, 30, 40, 50};
        if (axis == "bits") return {64, 128, 256, 512};
    } else {
        if (axis == "tables") return {1, 2, 4, 8, 16};
        const LshParams defaults = default_lsh_params(
            method == "multiprobe-lsh" ? LshVariant::MultiProbe
            : method == "uniform-lsh"  ? LshVariant::Uniform
                                       : LshVariant::Classic);
        if (axis == "hash_length") return {defaults.hash_length};
        if (axis == "probes") return {defaults.probes};
    }
    throw ConfigError("no default grid for axis " + axis + " of method " + method);
}

void apply_axes(BenchJob& job, const std::map<std::string, std::uint64_t>& point) {
    for (const auto& [axis, value] : point) {
        if (axis == "trees") job.rbt.num_trees = static_cast<std::uint32_t>(value);
        else if (axis == "depth") job.rbt.max_depth = static_cast<std::uint32_t>(value);
        else if (axis == "bits") job.rbt.max_bits = static_cast<std::uint32_t>(value);
        else if (axis == "tables") job.lsh.num_tables = static_cast<std::uint32_t>(value);
        else if (axis == "hash_length") job.lsh.hash_length = static_cast<std::uint32_t>(value);
        else if (axis == "probes") job.lsh.probes = static_cast<std::uint32_t>(value);
    }
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig config;
    SweepConfig::MethodGrid* current = nullptr;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header at " + where);
            const std::string method = trim(line.substr(1, line.size() - 2));
            if (!axes_by_method().count(method))
                throw ConfigError("unknown method section [" + method + "] at " + where);
            for (const auto& grid : config.grids)
                if (grid.method == method)
                    throw ConfigError("duplicate section [" + method + "] at " + where);
            config.grids.push_back({method, {}});
            current = &config.grids.back();
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at " + where + ": '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key at " + where);

        if (current == nullptr) {
            if (key == "dataset") config.dataset_path = value;
            else if (key == "output") config.output_path = value;
            else if (key == "subset") config.subset = parse_u64(value, key);
            else if (key == "queries") config.queries = parse_u64(value, key);
            else if (key == "runs") config.runs = parse_u64(value, key);
            else if (key == "n") config.n = parse_u64(value, key);
            else if (key == "seed") config.seed = parse_u64(value, key);
            else throw ConfigError("unknown global key '" + key + "' at " + where);
            continue;
        }

        const auto& axes = axes_by_method().at(current->method);
        if (std::find(axes.begin(), axes.end(), key) == axes.end())
            throw ConfigError("method " + current->method + " has no axis '" + key + "' at " +
                              where);
        current->axes[key] = parse_u64_list(value, current->method + "." + key);
    }
    if (config.grids.empty()) throw ConfigError("config declares no method sections");
    return config;
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_sweep_config(in);
}

std::vector<BenchJob> expand_jobs(const SweepConfig& config) {
    std::vector<BenchJob> jobs;
    for (const auto& grid : config.grids) {
        const auto& axis_names = axes_by_method().at(grid.method);
        std::vector<std::vector<std::uint64_t>> values;
        for (const auto& axis : axis_names) {
            const auto it = grid.axes.find(axis);
            values.push_back(it != grid.axes.end() ? it->second
                                                   : default_axis(grid.method, axis));
        }

        // Odometer over the axes, last axis fastest.
        std::vector<std::size_t> cursor(axis_names.size(), 0);
        while (true) {
            std::map<std::string, std::uint64_t> point;
            for (std::size_t a = 0; a < axis_names.size(); ++a)
                point[axis_names[a]] = values[a][cursor[a]];
            BenchJob job = default_job(grid.method);
            apply_axes(job, point);
            jobs.push_back(job);

            bool done = axis_names.empty();
            for (std::size_t a = axis_names.size(); !done;) {
                if (a == 0) {
                    done = true;
                    break;
                }
                --a;
                if (++cursor[a] < values[a].size()) break;
                cursor[a] = 0;
            }
            if (done) break;
        }
    }
    return jobs;
}

}  // namespace binann

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

// End-to-end checks against the installed binary (path injected by the build).

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string err_path = "cli_stderr.tmp";
    const std::string cmd =
        std::string(BINANN_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    for (std::string line; std::getline(ss, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

// Benchmark CSV with the timing column blanked, for determinism comparisons.
std::string strip_timing(const std::string& csv) {
    std::string out;
    const auto lines = lines_of(csv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto cells = split_csv(lines[i]);
        if (i > 0 && cells.size() >= 11) cells[10] = "";  // avg_query_us
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out += ',';
            out += cells[c];
        }
        out += '\n';
    }
    return out;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

// One small dataset shared by the test cases below.
const char* dataset_path() {
    static const std::string path = [] {
        const std::string p = "cli_test_data.bdsc";
        const auto r = run_cli("gen --points 50 --per-point 5 --dim 64 --flip 0.1 --seed 3 -o " + p);
        REQUIRE(r.exit_code == 0);
        return p;
    }();
    return path.c_str();
}

}  // namespace

TEST_CASE("gen writes a deterministic dataset file") {
    TempFile a("cli_gen_a.bdsc"), b("cli_gen_b.bdsc");
    const std::string flags = "gen --points 20 --per-point 4 --dim 128 --flip 0.05 -o ";
    CHECK(run_cli(flags + a.path + " --seed 9").exit_code == 0);
    CHECK(run_cli(flags + b.path + " --seed 9").exit_code == 0);
    const auto bytes_a = slurp(a.path);
    CHECK(!bytes_a.empty());
    CHECK(bytes_a == slurp(b.path));  // same flags, byte-identical files

    TempFile c("cli_gen_c.bdsc");
    CHECK(run_cli(flags + c.path + " --seed 10").exit_code == 0);
    CHECK(bytes_a != slurp(c.path));
}

TEST_CASE("gen without an output path is a usage error") {
    const auto r = run_cli("gen --points 5");
    CHECK(r.exit_code == 2);
    CHECK(!r.err.empty());
}

TEST_CASE("bench emits run rows plus an aggregate row") {
    const auto r = run_cli(std::string("bench --data ") + dataset_path() +
                           " --method rbt --trees 3 --depth 10 --bits 64 --n 10"
                           " --queries 40 --runs 4 --seed 1");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 4 + 1);  // header, runs, aggregate
    CHECK(lines[0].find("method,trees,depth,bits,") == 0);
    CHECK(lines[0].find("precision_at_10") != std::string::npos);
    CHECK(split_csv(lines[1])[7] == "1");
    CHECK(split_csv(lines[5])[7] == "mean");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        CHECK(cells[0] == "rbt");
        CHECK(cells[1] == "3");
        CHECK(cells[2] == "10");
        CHECK(cells[3] == "64");
        CHECK(cells[4] == "");  // lsh columns stay empty
    }
}

TEST_CASE("bench rejects an unknown method as usage error") {
    const auto r =
        run_cli(std::string("bench --data ") + dataset_path() + " --method kdtree");
    CHECK(r.exit_code == 2);
}

TEST_CASE("bench with an oversized subset is a runtime error") {
    const auto r = run_cli(std::string("bench --data ") + dataset_path() +
                           " --method oracle --subset 100000 --queries 10 --runs 1");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("subset") != std::string::npos);
}

TEST_CASE("bench on a missing dataset is a runtime error") {
    const auto r = run_cli("bench --data nope.bdsc --method oracle");
    CHECK(r.exit_code == 1);
}

TEST_CASE("depth-0 rbt matches the oracle") {
    const auto r = run_cli(std::string("bench --data ") + dataset_path() +
                           " --method rbt --trees 1 --depth 0 --bits 64"
                           " --queries 30 --runs 2 --seed 4 --check-oracle");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    CHECK(lines[0].find(",matches_oracle") != std::string::npos);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(split_csv(lines[i]).back() == "true");
    }
}

TEST_CASE("bench output is deterministic apart from timing columns") {
    const std::string flags = std::string("bench --data ") + dataset_path() +
                              " --method multiprobe-lsh --tables 2 --hash-length 12"
                              " --probes 3 --queries 40 --runs 3 --seed 11";
    const auto a = run_cli(flags);
    const auto b = run_cli(flags);
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(strip_timing(a.out) == strip_timing(b.out));
}

TEST_CASE("bench emits parseable json") {
    const auto r = run_cli(std::string("bench --data ") + dataset_path() +
                           " --method lsh --tables 2 --hash-length 16"
                           " --queries 20 --runs 2 --seed 8 --json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"method\": \"lsh\"") != std::string::npos);
    CHECK(r.out.find("\"per_run\"") != std::string::npos);
    CHECK(r.out.find("\"aggregate\"") != std::string::npos);
}

TEST_CASE("a single-cell sweep reproduces the bench row") {
    TempFile config("cli_sweep_single.ini");
    {
        std::ofstream out(config.path);
        out << "dataset = " << dataset_path() << "\n"
            << "queries = 40\nruns = 3\nn = 10\nseed = 11\n"
            << "[multiprobe-lsh]\ntables = 2\nhash_length = 12\nprobes = 3\n";
    }
    const auto swept = run_cli("sweep --config " + config.path);
    REQUIRE(swept.exit_code == 0);

    const auto benched = run_cli(std::string("bench --data ") + dataset_path() +
                                 " --method multiprobe-lsh --tables 2 --hash-length 12"
                                 " --probes 3 --queries 40 --runs 3 --seed 11"
                                 " --aggregate-only");
    REQUIRE(benched.exit_code == 0);
    CHECK(strip_timing(swept.out) == strip_timing(benched.out));
}

TEST_CASE("sweep honours flag overrides") {
    TempFile config("cli_sweep_override.ini");
    {
        std::ofstream out(config.path);
        out << "dataset = nope.bdsc\nqueries = 10\nruns = 5\n[oracle]\n";
    }
    // --data rescues the bad path; --runs shrinks the schedule
    const auto r = run_cli("sweep --config " + config.path + " --data " + dataset_path() +
                           " --runs 1 --queries 5");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);  // header + 1 aggregate row
    CHECK(split_csv(lines[1])[0] == "oracle");
    CHECK(split_csv(lines[1])[15] == "1");
}

TEST_CASE("an axis-free rbt section expands to the default 5x4x4 grid") {
    TempFile data("cli_sweep_grid.bdsc");
    REQUIRE(run_cli("gen --points 40 --per-point 5 --dim 512 --flip 0.05 --seed 12 -o " +
                    data.path)
                .exit_code == 0);
    TempFile config("cli_sweep_grid.ini");
    {
        std::ofstream out(config.path);
        out << "dataset = " << data.path << "\nqueries = 20\nruns = 1\n[rbt]\n";
    }
    const auto r = run_cli("sweep --config " + config.path);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 80);  // header + one aggregate row per grid cell
    // last axis (bits) varies fastest; grid order trees x depth x bits
    auto first = split_csv(lines[1]);
    CHECK(first[1] == "1");
    CHECK(first[2] == "20");
    CHECK(first[3] == "64");
    CHECK(split_csv(lines[2])[3] == "128");
    CHECK(split_csv(lines[5])[2] == "30");
    auto last = split_csv(lines[80]);
    CHECK(last[1] == "12");
    CHECK(last[2] == "50");
    CHECK(last[3] == "512");
}

TEST_CASE("malformed sweep configs are usage errors") {
    TempFile empty_axis("cli_sweep_empty.ini");
    {
        std::ofstream out(empty_axis.path);
        out << "dataset = " << dataset_path() << "\n[rbt]\ntrees =\n";
    }
    CHECK(run_cli("sweep --config " + empty_axis.path).exit_code == 2);

    TempFile garbage("cli_sweep_garbage.ini");
    {
        std::ofstream out(garbage.path);
        out << "this is not a config\n";
    }
    CHECK(run_cli("sweep --config " + garbage.path).exit_code == 2);

    CHECK(run_cli("sweep --config does_not_exist.ini").exit_code == 2);
    CHECK(run_cli("sweep").exit_code == 2);  // --config is required
}

TEST_CASE("metrics dumps one row per bit") {
    TempFile clean("cli_metrics_clean.bdsc");
    REQUIRE(run_cli("gen --points 10 --per-point 6 --dim 32 --flip 0 --seed 2 -o " + clean.path)
                .exit_code == 0);
    const auto r = run_cli("metrics --data " + clean.path);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 32);
    CHECK(lines[0] == "bit,entropy,cond_entropy,stability");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        REQUIRE(cells.size() == 4);
        CHECK(cells[0] == std::to_string(i - 1));
        CHECK(cells[3] == "1");  // flip 0: every bit perfectly stable
    }
}

TEST_CASE("metrics on a single-label dataset equates the entropy columns") {
    TempFile single("cli_metrics_single.bdsc");
    REQUIRE(run_cli("gen --points 1 --per-point 40 --dim 16 --flip 0.3 --seed 6 -o " +
                    single.path)
                .exit_code == 0);
    const auto r = run_cli("metrics --data " + single.path);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 16);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        CHECK(cells[1] == cells[2]);  // conditioning on a constant changes nothing
    }
}

TEST_CASE("top-level usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);             // missing subcommand
    CHECK(run_cli("frobnicate").exit_code == 2);   // unknown subcommand
    CHECK(run_cli("bench").exit_code == 2);        // missing required flags
    CHECK(run_cli("--help").exit_code == 0);       // help is a success path
}

TEST_CASE("dataset cleanup") {
    // runs last in file order under doctest's default ordering
    std::remove(dataset_path());
    CHECK(true);
}

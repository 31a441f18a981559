#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "binann/bench_driver.hpp"
#include "binann/eval.hpp"
#include "binann/rbt_forest.hpp"
#include "binann/rng.hpp"
#include "test_util.hpp"

using namespace binann;

namespace {

LabeledDataset labeled_rows(std::uint32_t dim, const std::vector<PointLabel>& labels,
                            binann::Rng& rng) {
    LabeledDataset dataset(dim);
    for (const auto label : labels) dataset.add(testutil::random_descriptor(dim, rng), label);
    return dataset;
}

}  // namespace

TEST_CASE("exact_top_n trivial cases") {
    Rng rng(1);
    LabeledDataset dataset(32);
    dataset.add(testutil::random_descriptor(32, rng), 0);

    SUBCASE("excluding the only descriptor leaves nothing") {
        CHECK(exact_top_n(dataset, dataset.descriptor(0), 5, DescriptorId{0}).empty());
    }
    SUBCASE("a stored query comes back first at distance zero") {
        dataset.add(testutil::random_descriptor(32, rng), 1);
        dataset.add(testutil::random_descriptor(32, rng), 2);
        const auto got = exact_top_n(dataset, dataset.descriptor(1), 3);
        REQUIRE(!got.empty());
        CHECK(got[0] == Neighbor{1, 0});
    }
    SUBCASE("n below 1 is rejected") {
        CHECK_THROWS_AS(exact_top_n(dataset, dataset.descriptor(0), 0), std::invalid_argument);
    }
}

TEST_CASE("exact_top_n equals select_top_n over the full id set") {
    Rng rng(2);
    const auto dataset = testutil::random_dataset(128, 40, 5, 0.15, rng);
    std::vector<DescriptorId> all(dataset.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<DescriptorId>(i);

    for (int rep = 0; rep < 30; ++rep) {
        const auto q = testutil::random_descriptor(128, rng);
        CHECK(exact_top_n(dataset, q, 10) == select_top_n(all, q, dataset, 10));
    }
}

TEST_CASE("exact_top_n honours the exclude id") {
    Rng rng(3);
    const auto dataset = testutil::random_dataset(64, 20, 5, 0.1, rng);
    for (std::size_t i = 0; i < dataset.size(); i += 13) {
        const auto got =
            exact_top_n(dataset, dataset.descriptor(i), 10, static_cast<DescriptorId>(i));
        for (const auto& nb : got) CHECK(nb.id != i);
    }
}

TEST_CASE("precision fixed cases") {
    Rng rng(4);
    // labels: ids 0..9 -> label 1, ids 10..19 -> label 2
    const auto dataset =
        labeled_rows(16, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2}, rng);

    std::vector<Neighbor> all_match, none_match, four_match;
    for (DescriptorId i = 0; i < 10; ++i) all_match.push_back({i, i});
    for (DescriptorId i = 10; i < 20; ++i) none_match.push_back({i, i});
    for (DescriptorId i = 0; i < 4; ++i) four_match.push_back({i, i});
    for (DescriptorId i = 10; i < 16; ++i) four_match.push_back({i, i});

    CHECK(precision_at_n(all_match, 1, dataset, 10) == 1.0);
    CHECK(precision_at_n(none_match, 1, dataset, 10) == 0.0);
    CHECK(precision_at_n(four_match, 1, dataset, 10) == doctest::Approx(0.4).epsilon(1e-12));

    // the denominator stays n when fewer results come back
    const std::vector<Neighbor> two{{0, 0}, {1, 1}};
    CHECK(precision_at_n(two, 1, dataset, 10) == doctest::Approx(0.2).epsilon(1e-12));

    CHECK_THROWS_AS(precision_at_n(two, 1, dataset, 0), std::invalid_argument);
}

TEST_CASE("recall fixed cases") {
    Rng rng(5);
    // label 1: ids 0..5 (6 descriptors); label 2: ids 6..14 (9); label 3: id 15 alone
    std::vector<PointLabel> labels;
    for (int i = 0; i < 6; ++i) labels.push_back(1);
    for (int i = 0; i < 9; ++i) labels.push_back(2);
    labels.push_back(3);
    const auto dataset = labeled_rows(16, labels, rng);

    SUBCASE("all five others retrieved") {
        // query id 0 (label 1): 5 other same-label ids, all in the top 10
        std::vector<Neighbor> retrieved;
        for (DescriptorId i = 1; i <= 5; ++i) retrieved.push_back({i, 1});
        for (DescriptorId i = 6; i <= 10; ++i) retrieved.push_back({i, 2});
        const auto r = recall_at_n(retrieved, 1, dataset, 10, 0);
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("none retrieved") {
        std::vector<Neighbor> retrieved{{6, 0}, {7, 1}};
        const auto r = recall_at_n(retrieved, 1, dataset, 10, 0);
        REQUIRE(r.has_value());
        CHECK(*r == 0.0);
    }
    SUBCASE("half of eight others retrieved") {
        // query id 6 (label 2): 8 other same-label ids, 4 retrieved
        std::vector<Neighbor> retrieved;
        for (DescriptorId i = 7; i <= 10; ++i) retrieved.push_back({i, 1});
        for (DescriptorId i = 0; i <= 5; ++i) retrieved.push_back({i, 2});
        const auto r = recall_at_n(retrieved, 2, dataset, 10, 6);
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("singleton labels are skipped") {
        const std::vector<Neighbor> retrieved{{0, 0}};
        CHECK_FALSE(recall_at_n(retrieved, 3, dataset, 10, 15).has_value());
    }
}

TEST_CASE("oracle index is an exhaustive AnnIndex") {
    Rng rng(6);
    const auto dataset = testutil::random_dataset(64, 15, 4, 0.1, rng);
    const OracleIndex oracle(dataset);

    CHECK(oracle.memory_bytes() == 0);
    const auto q = testutil::random_descriptor(64, rng);
    CHECK(oracle.candidates(q).size() == dataset.size());
    CHECK(oracle.query(q, 10) == exact_top_n(dataset, q, 10));
}

TEST_CASE("a candidate set equal to the oracle top-n yields identical metrics") {
    Rng rng(7);
    const auto dataset = testutil::random_dataset(64, 25, 4, 0.1, rng);
    for (int rep = 0; rep < 20; ++rep) {
        const auto q = testutil::random_descriptor(64, rng);
        const auto oracle_top = exact_top_n(dataset, q, 10);
        std::vector<DescriptorId> ids;
        for (const auto& nb : oracle_top) ids.push_back(nb.id);
        const auto ranked = select_top_n(ids, q, dataset, 10);
        CHECK(ranked == oracle_top);
        CHECK(precision_at_n(ranked, 0, dataset, 10) == precision_at_n(oracle_top, 0, dataset, 10));
    }
}

TEST_CASE("run_benchmark on the oracle at full n gives recall 1") {
    Rng rng(8);
    const auto dataset = testutil::random_dataset(64, 12, 5, 0.1, rng);  // every label has 5

    BenchConfig cfg;
    cfg.n = dataset.size();  // retrieve everything
    cfg.queries_per_run = 20;
    cfg.runs = 3;
    cfg.base_seed = 9;

    const auto report = run_job(dataset, default_job("oracle"), cfg);
    REQUIRE(report.per_run.size() == 3);
    for (const auto& run : report.per_run) {
        CHECK(run.recall == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(run.recall_skipped == 0);
        CHECK(run.memory_bytes == 0);
        CHECK(run.mean_candidates == doctest::Approx(double(dataset.size())));
    }
    CHECK(report.aggregate.recall == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rbt at depth 0 reports metrics identical to the oracle") {
    Rng rng(9);
    const auto dataset = testutil::random_dataset(128, 30, 5, 0.1, rng);

    BenchConfig cfg;
    cfg.queries_per_run = 40;
    cfg.runs = 4;
    cfg.base_seed = 77;

    BenchJob rbt0 = default_job("rbt");
    rbt0.rbt.num_trees = 1;
    rbt0.rbt.max_depth = 0;
    rbt0.rbt.max_bits = 128;

    const auto a = run_job(dataset, rbt0, cfg);
    const auto b = run_job(dataset, default_job("oracle"), cfg);
    REQUIRE(a.per_run.size() == b.per_run.size());
    for (std::size_t r = 0; r < a.per_run.size(); ++r) {
        CHECK(a.per_run[r].precision == b.per_run[r].precision);
        CHECK(a.per_run[r].recall == b.per_run[r].recall);
        CHECK(a.per_run[r].recall_skipped == b.per_run[r].recall_skipped);
    }
    CHECK(a.aggregate.precision == b.aggregate.precision);
    CHECK(a.aggregate.recall == b.aggregate.recall);
}

TEST_CASE("run r of a longer schedule reproduces run r of a shorter one") {
    Rng rng(10);
    const auto dataset = testutil::random_dataset(64, 20, 5, 0.1, rng);

    BenchConfig one;
    one.queries_per_run = 30;
    one.runs = 1;
    one.base_seed = 5;
    BenchConfig ten = one;
    ten.runs = 10;

    BenchJob job = default_job("rbt");
    job.rbt.num_trees = 2;
    job.rbt.max_depth = 6;
    job.rbt.max_bits = 32;

    const auto short_report = run_job(dataset, job, one);
    const auto long_report = run_job(dataset, job, ten);
    CHECK(short_report.per_run[0].precision == long_report.per_run[0].precision);
    CHECK(short_report.per_run[0].recall == long_report.per_run[0].recall);
    CHECK(short_report.per_run[0].memory_bytes == long_report.per_run[0].memory_bytes);
    CHECK(short_report.per_run[0].mean_candidates == long_report.per_run[0].mean_candidates);
}

TEST_CASE("run_benchmark is deterministic apart from timings") {
    Rng rng(11);
    const auto dataset = testutil::random_dataset(64, 25, 4, 0.15, rng);

    BenchConfig cfg;
    cfg.queries_per_run = 25;
    cfg.runs = 5;
    cfg.base_seed = 13;
    cfg.subset_size = 60;

    BenchJob job = default_job("uniform-lsh");
    job.lsh.num_tables = 2;
    job.lsh.hash_length = 12;

    const auto a = run_job(dataset, job, cfg);
    const auto b = run_job(dataset, job, cfg);
    REQUIRE(a.per_run.size() == b.per_run.size());
    for (std::size_t r = 0; r < a.per_run.size(); ++r) {
        CHECK(a.per_run[r].precision == b.per_run[r].precision);
        CHECK(a.per_run[r].recall == b.per_run[r].recall);
        CHECK(a.per_run[r].memory_bytes == b.per_run[r].memory_bytes);
        CHECK(a.per_run[r].mean_candidates == b.per_run[r].mean_candidates);
        CHECK(a.per_run[r].recall_skipped == b.per_run[r].recall_skipped);
        CHECK(a.per_run[r].avg_query_us >= 0.0);
    }
}

TEST_CASE("run_benchmark rejects a subset larger than the dataset") {
    Rng rng(12);
    const auto dataset = testutil::random_dataset(64, 5, 4, 0.1, rng);
    BenchConfig cfg;
    cfg.subset_size = dataset.size() + 1;
    CHECK_THROWS_AS(run_job(dataset, default_job("oracle"), cfg), std::invalid_argument);
}

TEST_CASE("run_benchmark counts singleton-label queries as recall-skipped") {
    Rng rng(13);
    LabeledDataset dataset(32);
    for (int i = 0; i < 4; ++i) dataset.add(testutil::random_descriptor(32, rng), 0);
    dataset.add(testutil::random_descriptor(32, rng), 99);  // singleton label

    BenchConfig cfg;
    cfg.queries_per_run = dataset.size();  // query everything
    cfg.runs = 2;
    cfg.n = 3;

    const auto report = run_job(dataset, default_job("oracle"), cfg);
    for (const auto& run : report.per_run) {
        CHECK(run.queries == dataset.size());
        CHECK(run.recall_skipped == 1);
    }
    CHECK(report.aggregate.recall_skipped == 2);  // totalled over runs
}

TEST_CASE("csv output has the documented shape") {
    BenchReport report;
    report.method = "rbt";
    report.params = {{"trees", "3"}, {"depth", "40"}, {"bits", "256"}};
    report.n = 10;
    RunStats run;
    run.precision = 0.5;
    run.recall = 0.25;
    run.avg_query_us = 12.5;
    run.memory_bytes = 1024;
    run.mean_candidates = 7.5;
    run.queries = 100;
    report.per_run = {run, run};
    report.aggregate = run;
    report.aggregate.queries = 200;

    std::stringstream out;
    write_csv_header(out, 10);
    write_csv_rows(out, report);

    std::vector<std::string> lines;
    for (std::string line; std::getline(out, line);) lines.push_back(line);
    REQUIRE(lines.size() == 4);  // header + 2 runs + aggregate
    CHECK(lines[0] ==
          "method,trees,depth,bits,tables,hash_length,probes,run,precision_at_10,recall_at_10,"
          "avg_query_us,memory_bytes,mean_candidates,queries,recall_skipped,runs");
    CHECK(lines[1] == "rbt,3,40,256,,,,1,0.500000,0.250000,12.500,1024,7.50,100,0,2");
    CHECK(lines[2] == "rbt,3,40,256,,,,2,0.500000,0.250000,12.500,1024,7.50,100,0,2");
    CHECK(lines[3] == "rbt,3,40,256,,,,mean,0.500000,0.250000,12.500,1024,7.50,200,0,2");

    std::stringstream with_oracle;
    write_csv_header(with_oracle, 10, true);
    write_csv_rows(with_oracle, report, false, true);
    std::string header, row;
    std::getline(with_oracle, header);
    std::getline(with_oracle, row);
    CHECK(header.ends_with(",matches_oracle"));
    CHECK(row.ends_with(",true"));
}

TEST_CASE("json report carries the same numbers") {
    Rng rng(14);
    const auto dataset = testutil::random_dataset(64, 10, 4, 0.1, rng);
    BenchConfig cfg;
    cfg.queries_per_run = 10;
    cfg.runs = 2;

    BenchJob job = default_job("lsh");
    job.lsh.num_tables = 2;
    job.lsh.hash_length = 8;
    const auto report = run_job(dataset, job, cfg);

    const auto doc = nlohmann::json::parse(report_to_json(report));
    CHECK(doc["method"] == "lsh");
    CHECK(doc["runs"] == 2);
    CHECK(doc["n"] == 10);
    CHECK(doc["params"]["tables"] == "2");
    CHECK(doc["per_run"].size() == 2);
    CHECK(doc["aggregate"]["precision"].get<double>() ==
          doctest::Approx(report.aggregate.precision));
    CHECK(doc["aggregate"]["memory_bytes"].get<std::uint64_t>() ==
          report.aggregate.memory_bytes);
}

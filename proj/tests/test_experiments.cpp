#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fidelity/experiments.hpp"

using namespace fidelity;
using namespace fidelity::experiments;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fidelity-exp-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("comparator: pooled t test sanity") {
    // equal samples -> p = 1 territory; strongly shifted -> tiny p
    std::vector<double> a{0.1, -0.3, 0.5, 0.2, -0.1, 0.0, 0.4, -0.2};
    std::vector<double> b{5.1, 4.7, 5.5, 5.2, 4.9};
    CHECK(t_test_p(a, b) < 1e-6);
    std::vector<double> c{0.11, -0.29, 0.52, 0.19, -0.12};
    CHECK(t_test_p(a, c) > 0.5);
}

TEST_CASE("comparator: WMW normal approximation") {
    std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> b{10, 11, 12, 13, 14};
    CHECK(wmw_p(a, b) < 0.01);
    std::vector<double> c{1.5, 3.5, 5.5, 7.5, 2.5};
    CHECK(wmw_p(a, c) > 0.5);
}

TEST_CASE("comparator: two-sample KS statistic and exact p") {
    std::vector<double> a{1, 2, 3, 4};
    std::vector<double> b{5, 6, 7, 8};
    CHECK(ks2_statistic(a, b) == doctest::Approx(1.0));
    // complete separation at n1 = n2 = 4: D = 1 occurs in 2/C(8,4) = 2/70
    CHECK(ks2_p(a, b) == doctest::Approx(2.0 / 70.0).epsilon(1e-12));

    // exact routine matches enumerated null probabilities at small sizes:
    // P(D >= d_obs) computed by brute force over all interleavings
    std::vector<double> x{0.1, 0.5, 0.7};
    std::vector<double> y{0.2, 0.9};
    const double d_obs = ks2_statistic(x, y);
    int count = 0, total = 0;
    // enumerate rank patterns of 3 + 2 values
    for (int mask = 0; mask < 32; ++mask) {
        if (__builtin_popcount(mask) != 3) continue;
        ++total;
        std::vector<double> xa, xb;
        for (int i = 0; i < 5; ++i) {
            ((mask >> i) & 1 ? xa : xb).push_back(static_cast<double>(i));
        }
        if (ks2_statistic(xa, xb) >= d_obs - 1e-12) ++count;
    }
    CHECK(ks2_p(x, y) ==
          doctest::Approx(static_cast<double>(count) / total).epsilon(1e-12));
}

TEST_CASE("comparator: sd estimate") {
    std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(sd_estimate(x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sup_uniform_distance of a perfect grid is small") {
    std::vector<double> p;
    for (int i = 0; i < 1000; ++i) p.push_back((i + 0.5) / 1000.0);
    CHECK(sup_uniform_distance(p) <= 0.0005 + 1e-12);
}

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(1000, 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("null_dist experiment passes and is byte-deterministic") {
    ExperimentConfig cfg;
    cfg.name = "null_dist";
    cfg.seed = 5;
    cfg.realizations = 20000;
    cfg.overrides["n"] = "5";

    const auto d1 = fresh_dir("nulldist-a");
    const auto d2 = fresh_dir("nulldist-b");
    cfg.threads = 1;
    const auto s1 = run_experiment(cfg, d1);
    cfg.threads = 2;
    const auto s2 = run_experiment(cfg, d2);
    CHECK(s1.pass);
    CHECK(s2.pass);
    CHECK(s1.values.at("sup_distance") == s2.values.at("sup_distance"));
    // identical bytes regardless of worker count
    CHECK(slurp(d1 / "p_ecdf.tsv") == slurp(d2 / "p_ecdf.tsv"));
    CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
}

TEST_CASE("binary_demo experiment reproduces the golden values") {
    ExperimentConfig cfg;
    cfg.name = "binary_demo";
    cfg.seed = 1;
    const auto dir = fresh_dir("binary");
    const auto s = run_experiment(cfg, dir);
    CHECK(s.pass);
    CHECK(std::filesystem::exists(dir / "binomial_cumulative.tsv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("landscape_demo experiment") {
    ExperimentConfig cfg;
    cfg.name = "landscape_demo";
    cfg.seed = 3;
    const auto dir = fresh_dir("landscape");
    const auto s = run_experiment(cfg, dir);
    CHECK(s.pass);
    CHECK(std::filesystem::exists(dir / "landscape.tsv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown experiment and bad realizations are rejected") {
    ExperimentConfig cfg;
    cfg.name = "nosuch";
    CHECK_THROWS_AS(run_experiment(cfg, fresh_dir("bad")), data_error);
    cfg.name = "null_dist";
    cfg.realizations = 10;
    CHECK_THROWS_AS(run_experiment(cfg, fresh_dir("bad2")), std::domain_error);
}

TEST_CASE("experiment names cover the catalogue") {
    const auto names = experiment_names();
    CHECK(names.size() == 14);
}

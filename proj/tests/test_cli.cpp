#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FIDELITY_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::filesystem::path write_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("gof with a single centered point") {
    const auto data = write_file("fidelity-cli-one.txt", "0\n");
    const auto r = run_cli("gof --model family=gauss,beta=0,alpha=1 --data " + data.string());
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    CHECK(j["schema"] == "fidelity/1");
    CHECK(std::abs(j["f"].get<double>()) < 1e-12);
    CHECK(j["p"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["geometry"] == "line");
    CHECK(j["n"] == 1);
}

TEST_CASE("gof with ties exits 3 and reports a warning") {
    const auto data = write_file("fidelity-cli-tie.txt", "1\n1\n2\n");
    const auto r = run_cli("gof --model family=gauss,beta=0,alpha=1 --data " + data.string());
    CHECK(r.exit_code == 3);
    const auto j = json::parse(r.output);
    CHECK(j["p"].get<double>() == 0.0);
    CHECK(j["f"] == "-inf");
    REQUIRE(j.contains("warnings"));
}

TEST_CASE("gof outside the support exits 3 with a machine-readable error") {
    const auto data = write_file("fidelity-cli-neg.txt", "-1\n0.5\n");
    const auto r = run_cli("gof --model family=exponential,alpha=1 --data " + data.string());
    CHECK(r.exit_code == 3);
    const auto j = json::parse(r.output);
    REQUIRE(j.contains("error"));
    CHECK(j["error"]["code"] == "data_error");
    CHECK(j["error"].contains("message"));
    CHECK(j["error"].contains("context"));
}

TEST_CASE("null-table emits the published row for circle n=2") {
    const auto r = run_cli("null-table --geometry circle --n 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("-0.30685281944") != std::string::npos);
    CHECK(r.output.find("0.42134661097") != std::string::npos);
    CHECK(r.output.find("0.5303727787") != std::string::npos);
    CHECK(r.output.find("1.7284272626") != std::string::npos);
    CHECK(r.output.find("exact") != std::string::npos);
}

TEST_CASE("null-table with an n-list") {
    const auto r = run_cli("null-table --geometry line --n-list 1,2,3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("exact") != std::string::npos);
    CHECK(r.output.find("exponential") != std::string::npos);
    CHECK(r.output.find("gamma") != std::string::npos);
}

TEST_CASE("binary golden output") {
    const auto r = run_cli("binary --n 10 --k 3");
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    CHECK(j["q_star"].get<double>() == doctest::Approx(0.306089).epsilon(1e-5));
    CHECK(j["c_m_at"]["c_m"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(j["interval"]["q_lo"].get<double>() == doctest::Approx(0.107).epsilon(2e-3));
    CHECK(j["interval"]["q_hi"].get<double>() == doctest::Approx(0.571).epsilon(2e-3));
}

TEST_CASE("fit recovers a location parameter") {
    const auto data = write_file("fidelity-cli-fit.txt", "2.9\n3.4\n3.6\n4.1\n");
    const auto r = run_cli("fit --model family=gauss,beta=0,alpha=1 --fit mu --data " +
                           data.string());
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    const double mu = j["params"]["beta"].get<double>();
    CHECK(mu > 2.9);
    CHECK(mu < 4.1);
    CHECK(j["p"].get<double>() > 0.5);
}

TEST_CASE("fit with an all-degenerate landscape exits 4") {
    const auto data = write_file("fidelity-cli-fit-tie.txt", "1\n1\n");
    const auto r = run_cli("fit --model family=gauss,beta=0,alpha=1 --fit mu --data " +
                           data.string());
    CHECK(r.exit_code == 4);
    const auto j = json::parse(r.output);
    CHECK(j["error"]["code"] == "no_fit");
}

TEST_CASE("twosample requires a seed and produces a calibrated p") {
    const auto a = write_file("fidelity-cli-a.txt", "0.1\n0.4\n0.5\n0.62\n0.9\n");
    const auto b = write_file("fidelity-cli-b.txt", "0.2\n0.3\n0.7\n");
    const auto bad = run_cli("twosample --a " + a.string() + " --b " + b.string() +
                             " --null-replicates 1000");
    CHECK(bad.exit_code == 3);
    const auto r = run_cli("twosample --a " + a.string() + " --b " + b.string() +
                           " --null-replicates 1000 --seed 7");
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    CHECK(j["f"].get<double>() ==
          doctest::Approx(0.5 * (j["f1"].get<double>() + j["f2"].get<double>())));
    CHECK(j["p"].get<double>() > 0.0);
    CHECK(j["p"].get<double>() <= 1.0);

    // identical invocation gives identical bytes
    const auto again = run_cli("twosample --a " + a.string() + " --b " + b.string() +
                               " --null-replicates 1000 --seed 7");
    CHECK(again.output == r.output);
}

TEST_CASE("binned estimate subcommand") {
    const auto data = write_file("fidelity-cli-binned.csv",
                                 "edge_lo,edge_hi,count\n0,0.5,2\n0.5,1,0\n");
    const auto r = run_cli("binned --model family=uniform,beta=0,alpha=1 --data " +
                           data.string() + " --estimate");
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    CHECK(j["f_estimate"].get<double>() == doctest::Approx(-0.290787702451).epsilon(1e-9));
}

TEST_CASE("gof2d on synthetic points") {
    const auto data = write_file("fidelity-cli-2d.csv", "x,y\n7.2,3.1\n8,4\n6,2.5\n7.5,2\n6.5,3.5\n");
    const auto r = run_cli(
        "gof2d --model gauss2d:x0=7,y0=3,a=3,b=2,phi=1.0472 --method r-theta --data " +
        data.string());
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    CHECK(j["geometry"] == "joint");
    CHECK(j["p"].get<double>() >= 0.0);
    CHECK(j["p"].get<double>() <= 1.0);
    REQUIRE(j.contains("composition"));
    CHECK(j["composition"].size() == 2);
}

TEST_CASE("--help lists every flag for each subcommand") {
    struct Expect {
        const char* sub;
        std::vector<const char*> flags;
    };
    const std::vector<Expect> table = {
        {"gof", {"--model", "--data", "--column"}},
        {"fit", {"--model", "--fit", "--data", "--box", "--statistic"}},
        {"landscape", {"--model", "--grid", "--data", "--tsv"}},
        {"ttest", {"--model1", "--model2", "--a", "--b", "--share"}},
        {"twosample", {"--a", "--b", "--null-replicates", "--seed"}},
        {"binary", {"--n", "--k", "--level", "--mode"}},
        {"binned", {"--model", "--data", "--replicates", "--seed", "--estimate"}},
        {"gof2d", {"--model", "--data", "--method"}},
        {"null-table", {"--geometry", "--n", "--n-list"}},
        {"experiment", {"--name", "--seed", "--out", "--realizations", "--quick"}},
    };
    for (const auto& e : table) {
        const auto r = run_cli(std::string(e.sub) + " --help");
        CHECK(r.exit_code == 0);
        for (const char* flag : e.flags) {
            INFO(e.sub, " ", flag);
            CHECK(r.output.find(flag) != std::string::npos);
        }
    }
    // defaults are visible where declared
    const auto r = run_cli("binary --help");
    CHECK(r.output.find("0.9") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("gof --data /nonexistent-option-combo").exit_code == 2);
    CHECK(run_cli("nosuchcommand").exit_code == 2);
    CHECK(run_cli("landscape --model family=gauss --grid bad --data x").exit_code == 2);
}

TEST_CASE("landscape TSV golden shape") {
    const auto data = write_file("fidelity-cli-land.txt", "0.0\n0.5\n-0.5\n");
    const auto out = std::filesystem::temp_directory_path() / "fidelity-cli-land.tsv";
    const auto r = run_cli("landscape --model family=gauss,beta=0,alpha=1 --grid "
                           "mu=-1:1:5,sigma=0.5:2:4 --data " +
                           data.string() + " --tsv " + out.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "mu\tsigma\tf\tp");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("config file merges under flags") {
    // global --config precedes the subcommand; section names the subcommand
    const auto data = write_file("fidelity-cli-cfg-data.txt", "0\n");
    const auto cfg = write_file("fidelity-cli.cfg",
                                "[gof]\nmodel=\"family=gauss,beta=0,alpha=1\"\ndata=\"" +
                                    data.string() + "\"\n");
    const auto r = run_cli("--config " + cfg.string() + " gof");
    CHECK(r.exit_code == 0);
    const auto j = json::parse(r.output);
    CHECK(j["p"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    // explicit flags override config values
    const auto data2 = write_file("fidelity-cli-cfg-data2.txt", "0\n1\n");
    const auto r2 = run_cli("--config " + cfg.string() + " gof --data " + data2.string());
    CHECK(r2.exit_code == 0);
    CHECK(json::parse(r2.output)["n"] == 2);
}

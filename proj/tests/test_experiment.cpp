#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fpp/config.hpp"
#include "fpp/csv.hpp"
#include "fpp/errors.hpp"
#include "fpp/experiment.hpp"
#include "fpp/fpp_engine.hpp"
#include "fpp/manifest.hpp"

using namespace fpp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fpp_test_experiment_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig make(const std::string& command, const fs::path& out) {
    ExperimentConfig c;
    c.command = command;
    c.out = out;
    c.seed = 7;
    return c;
}

}  // namespace

TEST_CASE("grids") {
    const auto g = parse_grid("-5:5:0.1");
    REQUIRE(g.size() == 101);
    CHECK(g.front() == -5.0);
    CHECK(g[50] == 0.0);
    CHECK(g[57] == 0.7);
    CHECK(g[53] == 0.3);
    CHECK(g.back() == 5.0);
    CHECK(parse_grid("1,2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
    CHECK(parse_grid("2:2:1") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_grid("1:0:1"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
    CHECK_THROWS_AS(parse_grid("a,b"), ConfigError);
    CHECK(parse_int_list("1,2,4,8") == std::vector<int>{1, 2, 4, 8});
    CHECK_THROWS_AS(parse_int_list("1.5"), ConfigError);
}

TEST_CASE("validation") {
    ExperimentConfig c = make("simulate", "x");
    CHECK_NOTHROW(c.validate());
    c.seed.reset();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("simulate", "x");
    c.n = 29;
    CHECK_THROWS_AS(c.validate(), CapacityError);
    c = make("chenstein", "x");
    c.n = 11;
    CHECK_THROWS_AS(c.validate(), CapacityError);
    c = make("chenstein", "x");
    c.n = 6;
    c.r = 3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("chenstein", "x");
    c.n = 8;
    c.inner = 100;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("count-paths", "x");
    c.n = 11;
    CHECK_THROWS_AS(c.validate(), CapacityError);
    c = make("cascade", "x");
    c.depths = {13};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("limit-law", "x");
    c.z_grid = "0:1:0.5";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("verify", "x");
    c.seed.reset();
    CHECK_NOTHROW(c.validate());
    c.suite = "nope";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("frobnicate", "x");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = make("simulate", "x");
    c.workers = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("JSON overlay and echo") {
    ExperimentConfig base = make("simulate", "x");
    const ExperimentConfig c = apply_json(nlohmann::json{{"n", 9}, {"seed", 3}, {"a", -0.5}}, base);
    CHECK(c.n == 9);
    CHECK(*c.seed == 3);
    CHECK(c.a == -0.5);
    CHECK(c.replicas == base.replicas);
    CHECK_THROWS_AS(apply_json(nlohmann::json{{"nn", 9}}, base), ConfigError);
    CHECK_THROWS_AS(apply_json(nlohmann::json{{"n", "nine"}}, base), ConfigError);
    CHECK_THROWS_AS(apply_json(nlohmann::json::array(), base), ConfigError);

    const nlohmann::json plain = c.to_json(false);
    CHECK_FALSE(plain.contains("workers"));
    CHECK_FALSE(plain.contains("out"));
    CHECK(plain["n"] == 9);
    const nlohmann::json full = c.to_json(true);
    CHECK(full.contains("workers"));
    CHECK(full.contains("out"));

    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"command": "cascade", "samples": 50})";
    const ExperimentConfig loaded = load_config_file(dir / "c.json", ExperimentConfig{});
    CHECK(loaded.command == "cascade");
    CHECK(loaded.samples == 50);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_config_file(dir / "bad.json", ExperimentConfig{}), ConfigError);
    CHECK_THROWS_AS(load_config_file(dir / "missing.json", ExperimentConfig{}), ConfigError);
}

TEST_CASE("CSV formatting and round trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    for (const double v : {0.1 + 0.2, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    {
        CsvWriter w(dir / "t.csv");
        w.meta("k", "v");
        w.header({"a", "b", "c"});
        w.row(std::uint64_t{1}, 0.5, "x");
        w.row(-2, 1e-3, std::string("y"));
        w.close();
    }
    CHECK(slurp(dir / "t.csv") == "# k=v\na,b,c\n1,0.5,x\n-2,0.001,y\n");
    const CsvTable t = read_csv(dir / "t.csv");
    CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == "0.001");
    CHECK_THROWS_AS(CsvWriter(dir / "no" / "such" / "dir.csv"), IoError);
}

TEST_CASE("sha256") {
    const fs::path dir = scratch("sha");
    fs::create_directories(dir);
    std::ofstream(dir / "abc", std::ios::binary) << "abc";
    CHECK(sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::ofstream(dir / "empty", std::ios::binary).close();
    CHECK(sha256_file(dir / "empty") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("simulate writes replica rows that match the engine") {
    const fs::path out = scratch("sim");
    ExperimentConfig c = make("simulate", out);
    c.n = 8;
    c.replicas = 50;
    c.a = 0.5;
    const RunManifest m = run_experiment(c);
    const CsvTable t = read_csv(out / "simulate.csv");
    CHECK(t.header == std::vector<std::string>{"replica", "m_n", "centered_min", "count_a"});
    REQUIRE(t.rows.size() == 50);
    for (std::size_t i = 0; i < t.rows.size(); i += 7) {
        const WeightField f({8, 7, i});
        CHECK(std::stoull(t.rows[i][0]) == i);
        CHECK(std::stod(t.rows[i][1]) == first_passage_time(f));
        CHECK(std::stoull(t.rows[i][3]) == count_extremal(f, 0.5));
    }
    const std::string text = slurp(out / "simulate.csv");
    CHECK(text.rfind("# fpplab=1.0.0\n# command=simulate\n# config=", 0) == 0);
    CHECK(text.find("workers") == std::string::npos);

    REQUIRE(m.files.size() == 1);
    CHECK(m.files[0].name == "simulate.csv");
    CHECK(m.files[0].sha256 == sha256_file(out / "simulate.csv"));
    const auto j = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(j["version"] == "1.0.0");
    CHECK(j["files"][0]["sha256"] == m.files[0].sha256);
    CHECK(j["config"]["seed"] == 7);
    CHECK(j["summary"].contains("ks_limit_cdf"));
}

TEST_CASE("outputs are identical across runs and worker counts") {
    for (const std::string cmd : {"simulate", "cascade", "contraction", "chenstein"}) {
        ExperimentConfig c = make(cmd, scratch(cmd + "_1"));
        c.n = cmd == "chenstein" ? 6 : 8;
        c.replicas = 40;
        c.samples = 2000;
        c.depths = {1, 3};
        c.steps = 3;
        c.environments = 3;
        c.workers = 1;
        const RunManifest a = run_experiment(c);
        c.out = scratch(cmd + "_2");
        c.workers = 3;
        const RunManifest b = run_experiment(c);
        REQUIRE(a.files.size() == b.files.size());
        for (std::size_t i = 0; i < a.files.size(); ++i) CHECK_MESSAGE(a.files[i].sha256 == b.files[i].sha256, cmd);
    }
}

TEST_CASE("limit-law grid and monotone cdf") {
    const fs::path out = scratch("ll");
    ExperimentConfig c = make("limit-law", out);
    run_experiment(c);
    const CsvTable t = read_csv(out / "limit_law.csv");
    REQUIRE(t.rows.size() == 101);
    double prev = -1.0;
    for (const auto& row : t.rows) {
        const double f = std::stod(row[1]);
        CHECK(f > prev);
        prev = f;
    }
    CHECK(fs::exists(out / "density.csv"));
}

TEST_CASE("count-paths table") {
    const fs::path out = scratch("cp");
    ExperimentConfig c = make("count-paths", out);
    c.n = 5;
    c.r = 1;
    run_experiment(c);
    const CsvTable t = read_csv(out / "count_paths.csv");
    CHECK(t.header == std::vector<std::string>{"n", "k", "f", "f_r"});
    std::vector<std::string> f3;
    for (const auto& row : t.rows) {
        if (row[0] == "3") f3.push_back(row[2]);
    }
    CHECK(f3 == std::vector<std::string>{"3", "2", "0", "1"});
    CHECK(fs::exists(out / "count_paths_audit.csv"));
}

TEST_CASE("exit codes") {
    const fs::path vdir = scratch("v");
    ExperimentConfig ok = make("verify", vdir);
    ok.suite = "appendix";
    ok.seed.reset();
    CHECK(run_to_exit_code(ok) == kExitOk);
    const CsvTable t = read_csv(vdir / "verify.csv");
    CHECK_FALSE(t.rows.empty());

    ExperimentConfig cap = make("simulate", scratch("cap"));
    cap.n = 29;
    CHECK(run_to_exit_code(cap) == kExitCapacity);

    ExperimentConfig cfg = make("simulate", scratch("cfg2"));
    cfg.seed.reset();
    CHECK(run_to_exit_code(cfg) == kExitConfig);

    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "file";
    ExperimentConfig io = make("count-paths", blocker / "sub");
    io.n = 4;
    CHECK(run_to_exit_code(io) == kExitIo);
    fs::remove(blocker);
}

TEST_CASE("verify rows") {
    const auto rows = run_verify("all", kVerifyDefaultSeed);
    int audits = 0;
    for (const auto& r : rows) {
        if (r.audit) {
            ++audits;
        } else {
            CHECK_MESSAGE(r.pass, r.suite << "/" << r.check << " observed " << r.observed);
        }
    }
    CHECK(audits >= 1);
    CHECK_THROWS_AS(run_verify("nope", 1), ConfigError);
}

TEST_CASE("simulate table budget") {
    CHECK(table_workers(12, 8) == 8);
    // 2^28 doubles per table
    CHECK(table_workers(28, 8) == 2);
    CHECK(table_workers(28, 1) == 1);
    CHECK(table_workers(27, 8) >= 1);
}

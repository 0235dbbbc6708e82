#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "astopo/compare.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(ASTOPO_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

json report(double avg_degree, double max_degree) {
    return {{"avg_degree", avg_degree}, {"max_degree", max_degree}};
}

}  // namespace

TEST_CASE("compare tolerances") {
    const auto rows = astopo::compare_reports(report(4.21, 2384), report(4.16, 2385),
                                              json{{"avg_degree", 0.1}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].pass);

    const auto rel = astopo::compare_reports(report(4.21, 2384), report(4.16, 1014),
                                             json::parse(R"({"max_degree": {"rel": 0.1}})"));
    REQUIRE(rel.size() == 1);
    CHECK_FALSE(rel[0].pass);

    const auto mixed = astopo::compare_reports(report(1, 100), report(1, 109),
                                               json::parse(R"({"max_degree": {"abs": 1, "rel": 0.08}})"));
    CHECK(mixed[0].pass);

    CHECK_THROWS_AS(astopo::compare_reports(json{{"avg_degree", 4.0}}, json::object(), json{{"avg_degree", 0.1}}),
                    astopo::MissingMetric);

    std::ostringstream out;
    astopo::print_comparison(rel, out);
    CHECK(out.str().find("max_degree") != std::string::npos);
}

TEST_CASE("command line round trip") {
    TempDir dir("astopo_cli_test");
    const std::string prof = dir / "profile.json";
    REQUIRE(run("extract " + std::string(ASTOPO_FIXTURE) + " " + prof) == 0);
    CHECK(fs::exists(prof + ".cleaning.json"));
    const json cleaning = json::parse(slurp(prof + ".cleaning.json"));
    CHECK(cleaning.is_object());
    CHECK(json::parse(slurp(prof)).at("n") == 19036);

    const std::string gen = dir / "gen";
    REQUIRE(run("generate " + prof + " --seed 3 --size 3000 --count 2 --out-dir " + gen) == 0);
    for (const char* f : {"fits.json", "graph_000.txt", "graph_000.add.json", "graph_000.json", "graph_001.txt"})
        CHECK(fs::exists(fs::path(gen) / f));
    const json meta = json::parse(slurp(gen + "/graph_000.json"));
    CHECK(meta.is_object());

    const std::string ev = dir / "eval";
    REQUIRE(run("eval " + gen + "/graph_000.txt " + gen + "/graph_001.txt --sources 50 --scatter --out-dir " + ev) == 0);
    for (const char* f : {"graph_000.report.json", "graph_001.report.json", "ensemble.json", "graph_000.scatter.csv"})
        CHECK(fs::exists(fs::path(ev) / f));
    const json r0 = json::parse(slurp(ev + "/graph_000.report.json"));
    CHECK(r0.at("avg_valid_distance").get<double>() >= r0.at("avg_distance").get<double>());
    CHECK(json::parse(slurp(ev + "/ensemble.json")).at("representative").contains("index"));

    // identical inputs compare equal; a tight tolerance catches differences
    const std::string a = ev + "/graph_000.report.json", b = ev + "/graph_001.report.json";
    CHECK(run("compare " + a + " " + a) == 0);
    CHECK(run("compare " + a + " " + b + " --tolerances '{\"nodes\": 0}'") == 1);
    CHECK(run("compare " + a + " " + b + " --tolerances '{\"avg_degree\": 10}'") == 0);
    write(dir / "tol.json", R"({"avg_degree": {"abs": 10}})");
    CHECK(run("compare " + a + " " + b + " --tolerances " + (dir / "tol.json")) == 0);
    CHECK(run("compare " + a + " " + b + " --tolerances '{\"no_such_metric\": 1}'") == 1);

    // same seed, same bytes
    const std::string gen2 = dir / "gen2";
    REQUIRE(run("generate " + prof + " --seed 3 --size 3000 --count 2 --out-dir " + gen2) == 0);
    CHECK(slurp(gen + "/graph_001.txt") == slurp(gen2 + "/graph_001.txt"));
    CHECK(slurp(gen + "/graph_000.add.json") == slurp(gen2 + "/graph_000.add.json"));
}

TEST_CASE("command line errors") {
    TempDir dir("astopo_cli_errors");
    CHECK(run("") != 0);
    CHECK(run("frobnicate") == 2);
    CHECK(run("extract " + (dir / "missing.txt") + " " + (dir / "p.json")) == 2);

    write(dir / "bad.txt", "1|2|7\n");
    CHECK(run("extract " + (dir / "bad.txt") + " " + (dir / "p.json")) == 2);

    write(dir / "siblings.txt", "1|2|1\n2|3|1\n");
    CHECK(run("extract " + (dir / "siblings.txt") + " " + (dir / "p.json")) == 1);

    write(dir / "split.txt", "1|2|-1\n3|4|0\n");
    CHECK(run("eval " + (dir / "split.txt") + " --out-dir " + (dir / "ev")) == 1);

    write(dir / "ok.txt", "1|2|-1\n2|3|0\n");
    CHECK(run("eval " + (dir / "ok.txt") + " --sources zero --out-dir " + (dir / "ev")) == 1);
    CHECK(run("eval " + (dir / "ok.txt") + " --out-dir " + (dir / "ev")) == 0);

    write(dir / "broken.json", "{not json");
    CHECK(run("generate " + (dir / "broken.json") + " --out-dir " + (dir / "g")) == 2);
    CHECK(run("compare " + (dir / "broken.json") + " " + (dir / "broken.json")) == 2);
    CHECK(run("generate " + (dir / "broken.json") + " --order 3k") == 2);
}

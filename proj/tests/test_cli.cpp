#include "sglab/empirical.hpp"
#include "sglab/report_io.hpp"
#include "sglab/rng.hpp"
#include "sglab/types.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace sglab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    if (const char* p = std::getenv("SGLAB_CLI_PATH")) return p;
#ifdef SGLAB_CLI_PATH
    return SGLAB_CLI_PATH;
#else
    FAIL("SGLAB_CLI_PATH must point to the binary");
    return "";
#endif
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("sglab_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::string write_config(const TempDir& dir, const json& cfg) {
    const std::string p = dir.file("config.json");
    std::ofstream out(p);
    out << cfg.dump(2) << '\n';
    return p;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("verify poincare end to end") {
    TempDir dir("poincare");
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "gaussian"}, {"dimension", 1}}},
                  {"rho", 1.0},
                  {"field", {{"name", "linear"}, {"params", {1.0}}}},
                  {"backend", {{"kind", "quadrature"}, {"order", 40}}}});
    const std::string out = dir.file("out");
    CHECK(run_cli("verify poincare --config " + cfg + " --out " + out) == 0);

    const json rep = read_json(out + "/report.json");
    CHECK(rep.at("kind") == "poincare");
    CHECK(rep.at("verdict") == "holds");
    CHECK(std::abs(rep.at("slack").get<double>()) <= 1e-10);
    CHECK(fs::exists(out + "/meta.json"));

    std::ifstream csv(out + "/report.csv");
    REQUIRE(csv.good());
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "kind,lhs,rhs,constant,slack,verdict");
    CHECK(row.substr(0, 9) == "poincare,");
    CHECK(row.substr(row.rfind(',') + 1) == "holds");
}

TEST_CASE("reports are byte identical across runs") {
    TempDir dir("repeat");
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "gaussian"}, {"dimension", 1}}},
                  {"rho", 1.0},
                  {"field", {{"name", "gauss-bump"}, {"params", {0.5}}}}});
    const std::string out1 = dir.file("a");
    const std::string out2 = dir.file("b");
    CHECK(run_cli("verify lsi --config " + cfg + " --out " + out1) == 0);
    CHECK(run_cli("verify lsi --config " + cfg + " --out " + out2) == 0);
    CHECK(read_text_file(out1 + "/report.json") ==
          read_text_file(out2 + "/report.json"));
}

TEST_CASE("tolerance and seed overrides reach the report") {
    TempDir dir("override");
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "gaussian"}, {"dimension", 1}}},
                  {"rho", 1.0},
                  {"field", {{"name", "shifted-density"}, {"params", {1.0}}}},
                  {"sample_count", 2000}});
    const std::string out = dir.file("out");
    CHECK(run_cli("verify talagrand --config " + cfg + " --out " + out +
                  " --tolerance 0.5 --seed 3") == 0);
    const json rep1 = read_json(out + "/report.json");
    CHECK(rep1.at("tolerance").get<double>() == 0.5);
    CHECK(rep1.at("inputs").at("seed").get<std::uint64_t>() == 3);

    CHECK(run_cli("verify talagrand --config " + cfg + " --out " + out +
                  " --tolerance 0.5 --seed 4") == 0);
    const json rep2 = read_json(out + "/report.json");
    CHECK(rep2.at("lhs").get<double>() != rep1.at("lhs").get<double>());
}

TEST_CASE("cd violation exits 1 with a witness") {
    TempDir dir("cd");
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "double-well"}, {"dimension", 1}}},
                  {"rho", 0.5},
                  {"n", "inf"},
                  {"points", {{"count", 200}, {"clip", 2.0}}}});
    const std::string out = dir.file("out");
    CHECK(run_cli("verify cd --config " + cfg + " --out " + out) == 1);
    const json rep = read_json(out + "/report.json");
    CHECK(rep.at("verdict") == "fails");
    CHECK(rep.at("min_gap").get<double>() < 0.0);
    CHECK(std::abs(rep.at("witness").at("point")[0].get<double>()) <= 0.5);
}

TEST_CASE("config errors exit 2 and leave an error report") {
    TempDir dir("badname");
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "no-such-well"}, {"dimension", 1}}},
                  {"field", {{"name", "linear"}, {"params", {1.0}}}}});
    const std::string out = dir.file("out");
    CHECK(run_cli("verify poincare --config " + cfg + " --out " + out) == 2);
    const json rep = read_json(out + "/report.json");
    CHECK(rep.at("error").at("kind") == "config");
    CHECK(!rep.at("error").at("reason").get<std::string>().empty());

    CHECK(run_cli("verify poincare --config " + dir.file("absent.json") +
                  " --out " + dir.file("out2")) == 2);
    CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("evolve writes a trace") {
    TempDir dir("evolve");
    const std::string cfg = write_config(
        dir,
        json{{"potential", {{"name", "gaussian"}, {"dimension", 1}}},
             {"field", {{"name", "quadratic"}}},
             {"times", {0.0, 0.5, 1.0}},
             {"evaluation_points", {{1.0}}},
             {"method", "mehler"},
             {"entropy", "off"}});
    const std::string out = dir.file("out");
    CHECK(run_cli("evolve --config " + cfg + " --out " + out) == 0);
    std::ifstream csv(out + "/trace.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "time,variance,entropy,fisher,value_p0");
    int rows = 0;
    for (std::string line; std::getline(csv, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    CHECK(fs::exists(out + "/trace_meta.json"));
}

TEST_CASE("decay fits the gaussian rate") {
    TempDir dir("decay");
    json times = json::array();
    for (int i = 0; i <= 5; ++i) times.push_back(0.2 * i);
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "gaussian"}, {"dimension", 1}}},
                  {"field", {{"name", "linear"}, {"params", {1.0}}}},
                  {"times", times},
                  {"track", "variance"},
                  {"entropy", "off"},
                  {"rho", 1.0},
                  {"order", 40}});
    const std::string out = dir.file("out");
    CHECK(run_cli("decay --config " + cfg + " --out " + out) == 0);
    const json rep = read_json(out + "/report.json");
    CHECK(rep.at("kind") == "decay");
    CHECK(std::abs(rep.at("rate").get<double>() + 2.0) <= 0.01);
    CHECK(rep.at("holds").get<bool>());
}

TEST_CASE("transport w2 on sample files") {
    TempDir dir("w2");
    EmpiricalMeasure a = sample_gaussian(1, 400, 77);
    EmpiricalMeasure b = a;
    for (Vec& x : b.points) x[0] += 1.0;
    write_points_csv(a, dir.file("a.csv"));
    write_points_csv(b, dir.file("b.csv"));
    const std::string cfg = write_config(
        dir, json{{"points_a", dir.file("a.csv")},
                  {"points_b", dir.file("b.csv")}});
    const std::string out = dir.file("out");
    CHECK(run_cli("transport w2 --config " + cfg + " --out " + out) == 0);
    const json rep = read_json(out + "/report.json");
    CHECK(std::abs(rep.at("w2").get<double>() - 1.0) <= 1e-12);
    CHECK(rep.at("coupling") == "monotone-1d");
}

TEST_CASE("transport brenier and monge-ampere") {
    TempDir dir("brenier");
    const std::string cfg = write_config(
        dir, json{{"field", {{"name", "shifted-density"}, {"params", {1.0}}}},
                  {"grid", {{"lo", -3.0}, {"hi", 3.0}, {"points", 2001}}},
                  {"direction", "forward"}});
    const std::string out = dir.file("out");
    CHECK(run_cli("transport brenier --config " + cfg + " --out " + out) == 0);
    const json rep = read_json(out + "/report.json");
    CHECK(std::abs(rep.at("w2_squared_from_map").get<double>() - 1.0) <= 1e-6);
    std::ifstream csv(out + "/brenier.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,T,theta");

    const std::string out2 = dir.file("out_ma");
    CHECK(run_cli("transport monge-ampere --config " + cfg + " --out " + out2 +
                  " --tolerance 1e-6") == 0);
    const json ma = read_json(out2 + "/report.json");
    CHECK(ma.at("max_relative_residual").get<double>() <= 1e-6);
    CHECK(ma.at("holds").get<bool>());
}

TEST_CASE("curvature command reports the minimum") {
    TempDir dir("curv");
    const std::string cfg = write_config(
        dir, json{{"potential", {{"name", "double-well"}, {"dimension", 1}}},
                  {"box", {{"lo", -2.0}, {"hi", 2.0}, {"points_per_axis", 401}}}});
    const std::string out = dir.file("out");
    CHECK(run_cli("curvature --config " + cfg + " --out " + out) == 0);
    const json rep = read_json(out + "/report.json");
    CHECK(std::abs(rep.at("min_curvature").get<double>() + 1.0) <= 1e-3);
    CHECK(std::abs(rep.at("argmin")[0].get<double>()) <= 0.02);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oscint/cli.hpp"
#include "oscint/util.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("oscint_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string write_config(const fs::path& dir, const json& j) {
    fs::path p = dir / "config.json";
    std::ofstream(p) << j.dump(2);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("integrate: closed form row and empty grid") {
    TempDir tmp("integrate");
    json cfg{{"schema", 1},
             {"amplitude", {{"mu", 1.0}, {"interval", {0.0, 1.0}}}},
             {"phase", {{"name", "linear"}}},
             {"omegas", {3.14159265358979323846}},
             {"tol", 1e-9}};
    int rc = oscint::cli::run_command("integrate", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 1, 0);
    CHECK(rc == oscint::cli::kOk);
    std::string csv = slurp(tmp.path / "out" / "integrate.csv");
    CHECK(csv.rfind("omega,re,im,abs,err_est,converged\n", 0) == 0);
    CHECK(csv.find("0.636619772") != std::string::npos);

    json empty = cfg;
    empty["omegas"] = json::array();
    rc = oscint::cli::run_command("integrate", write_config(tmp.path, empty),
                                  (tmp.path / "out2").string(), 1, 0);
    CHECK(rc == oscint::cli::kOk);
    CHECK(slurp(tmp.path / "out2" / "integrate.csv") == "omega,re,im,abs,err_est,converged\n");
}

TEST_CASE("integrate: out-of-range tolerance is a config error") {
    TempDir tmp("badtol");
    json cfg{{"schema", 1},
             {"amplitude", {{"mu", 1.0}, {"interval", {0.0, 1.0}}}},
             {"phase", {{"name", "linear"}}},
             {"omegas", {1.0}},
             {"tol", 1.0}};
    int rc = oscint::cli::run_command("integrate", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 1, 0);
    CHECK(rc == oscint::cli::kConfigError);
}

TEST_CASE("integrate: malformed config and budget exhaustion") {
    TempDir tmp("malformed");
    fs::path bad = tmp.path / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(oscint::cli::run_command("integrate", bad.string(), (tmp.path / "o").string(), 1, 0) ==
          oscint::cli::kConfigError);

    json cfg{{"schema", 1},
             {"amplitude", {{"mu", 1.0}, {"interval", {0.0, 1.0}}}},
             {"phase", {{"type", "power"}, {"p0", 0.0}, {"rho", 2.0}}},
             {"omegas", {1e6}},
             {"tol", 1e-9},
             {"max_panels", 64}};
    int rc = oscint::cli::run_command("integrate", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 1, 0);
    CHECK(rc == oscint::cli::kNumericalError);
    CHECK(fs::exists(tmp.path / "out" / "integrate.csv"));      // partial output kept
    CHECK(fs::exists(tmp.path / "out" / "diagnostics.json"));   // with a diagnostics block
}

TEST_CASE("bound: the worked interior example") {
    TempDir tmp("bound");
    json cfg{{"schema", 1},
             {"theorem", "T3.3"},
             {"amplitude", {{"mu", 0.5}, {"interval", {0.0, 1.0}}}},
             {"phase", {{"name", "square"}}}};
    int rc = oscint::cli::run_command("bound", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 1, 0);
    CHECK(rc == oscint::cli::kOk);
    json certs = json::parse(slurp(tmp.path / "out" / "certificates.json"));
    CHECK(certs["schema"] == 1);
    REQUIRE(certs["certificates"].size() == 1);
    CHECK(certs["certificates"][0]["constant"].get<double>() == doctest::Approx(10.0).epsilon(1e-5));
    CHECK(certs["certificates"][0]["theorem_tag"] == "T3.3");
}

TEST_CASE("verify: domination sweep for the worked example") {
    TempDir tmp("verify");
    json cfg{{"schema", 1},
             {"certificates",
              {{{"theorem_tag", "T3.3"}, {"constant", 10.0}, {"decay_exponent", -0.25}}}},
             {"truth",
              {{"kind", "oscillatory"},
               {"amplitude", {{"mu", 0.5}, {"interval", {0.0, 1.0}}}},
               {"phase", {{"name", "square"}}}}},
             {"grid", {{"lo", 1e-2}, {"hi", 1e4}, {"count", 30}}},
             {"tol", 1e-8}};
    int rc = oscint::cli::run_command("verify", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 2, 0);
    CHECK(rc == oscint::cli::kOk);
    json rep = json::parse(slurp(tmp.path / "out" / "verify.json"));
    CHECK(rep["all_dominated"] == true);
    CHECK(rep["max_ratio"].get<double>() < 1.0);
}

TEST_CASE("decay: synthetic power law end to end") {
    TempDir tmp("decay");
    json cfg{{"schema", 1},
             {"truth",
              {{"kind", "oscillatory"},
               {"amplitude", {{"mu", 0.5}, {"interval", {0.0, 1.0}}}},
               {"phase", {{"type", "power"}, {"p0", 0.0}, {"rho", 2.0}}}}},
             {"grid", {{"lo", 1e3}, {"hi", 1e6}, {"count", 73}}},
             {"tol", 1e-8},
             {"max_panels", 2000000.0}};
    int rc = oscint::cli::run_command("decay", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 2, 0);
    CHECK(rc == oscint::cli::kOk);
    json fit = json::parse(slurp(tmp.path / "out" / "decay.json"));
    CHECK(std::abs(fit["slope"].get<double>() + 0.25) <= 0.03);
    CHECK(slurp(tmp.path / "out" / "envelope.csv").rfind("x,y\n", 0) == 0);
}

TEST_CASE("determinism: identical outputs across worker counts") {
    TempDir tmp("determinism");
    json cfg{{"schema", 1},
             {"symbol", {{"name", "schrodinger"}}},
             {"datum", {{"name", "c1-band01 mu=0.5"}}},
             {"rays", {0.0, 6.0}},
             {"times", {{"lo", 1.0}, {"hi", 100.0}, {"count", 13}}},
             {"tol", 1e-7}};
    std::string cpath = write_config(tmp.path, cfg);
    CHECK(oscint::cli::run_command("propagate", cpath, (tmp.path / "w1").string(), 1, 7) ==
          oscint::cli::kOk);
    CHECK(oscint::cli::run_command("propagate", cpath, (tmp.path / "w4").string(), 4, 7) ==
          oscint::cli::kOk);
    for (const char* f : {"ray_0.csv", "ray_1.csv"}) {
        CHECK(slurp(tmp.path / "w1" / f) == slurp(tmp.path / "w4" / f));
        CHECK(!slurp(tmp.path / "w1" / f).empty());
    }
}

TEST_CASE("localize: cone labels and certificate status") {
    TempDir tmp("localize");
    json cfg{{"schema", 1},
             {"symbol", {{"name", "schrodinger"}}},
             {"datum", {{"name", "c1-band01 mu=0.5"}}},
             {"c1_tilde", {-1.0, 2.0}},
             {"rays", {0.0, 6.0}},
             {"times", {{"lo", 10.0}, {"hi", 1000.0}, {"count", 25}}},
             {"tol", 1e-7}};
    int rc = oscint::cli::run_command("localize", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 2, 0);
    CHECK(rc == oscint::cli::kOk);
    json rep = json::parse(slurp(tmp.path / "out" / "localization.json"));
    REQUIRE(rep["rays"].size() == 2);
    CHECK(rep["rays"][0]["dominated"]["T4.3-in"] == true);
    CHECK(rep["rays"][1]["dominated"]["T4.3-out"] == true);
}

TEST_CASE("kg-demo smoke run with trimmed grids") {
    TempDir tmp("kgdemo");
    json cfg{{"schema", 1},
             {"c", 1.0},
             {"mu", 0.5},
             {"alpha", 4.0},
             {"times", {{"lo", 1.0}, {"hi", 100.0}, {"count", 9}}},
             {"slope_times", {{"lo", 10.0}, {"hi", 1000.0}, {"count", 25}}},
             {"tol", 1e-5},
             {"recon_xs", {-1.5, 0.4, 2.0}}};
    int rc = oscint::cli::run_command("kg-demo", write_config(tmp.path, cfg),
                                      (tmp.path / "out").string(), 2, 0);
    CHECK(rc == oscint::cli::kOk);
    json rep = json::parse(slurp(tmp.path / "out" / "kg_demo.json"));
    CHECK(rep["certificates"].size() == 4);
    CHECK(rep["rays"][0]["dominated"] == true);
    CHECK(rep["rays"][1]["dominated"] == true);
    CHECK(rep["reconstruction"]["passed"] == true);
}

TEST_CASE("unknown command") {
    TempDir tmp("unknown");
    json cfg{{"schema", 1}};
    CHECK(oscint::cli::run_command("frobnicate", write_config(tmp.path, cfg),
                                   (tmp.path / "out").string(), 1, 0) ==
          oscint::cli::kConfigError);
}

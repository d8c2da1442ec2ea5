#include "estower/errors.hpp"
#include "estower/pipeline.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace estower;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_dimer(const std::string& out) {
    RunConfig cfg;
    cfg.model.model = Model::dimer;
    cfg.lx = 4;
    cfg.ly = 2;
    cfg.cut = "row:0";            // |A| = 4, tower spins 0..2
    cfg.candidates = {3, 4, 5};
    cfg.out = out;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, std::string& output) {
    const fs::path tmp = fs::temp_directory_path() / "estower_cli_output.txt";
    const std::string cmd = std::string(ESTOWER_CLI_PATH) + " " + args + " > " +
                            tmp.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    output = slurp(tmp);
    fs::remove(tmp);
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("end-to-end run emits a consistent artifact set") {
    TempDir dir("estower_e2e");
    RunConfig cfg = small_dimer(dir.path.string());
    const PipelineResult r = run_pipeline(cfg);

    CHECK(fs::exists(dir.path / "levels.csv"));
    CHECK(fs::exists(dir.path / "tower.csv"));
    CHECK(fs::exists(dir.path / "fit_report.txt"));
    CHECK(fs::exists(dir.path / "run_meta.json"));
    for (int n : {3, 4, 5})
        CHECK(fs::exists(dir.path / ("scatter_N" + std::to_string(n) + ".csv")));
    CHECK_FALSE(fs::exists(dir.path / "FAILED"));

    // levels.csv: header, xi-sorted rows, weights summing to one
    std::istringstream levels(slurp(dir.path / "levels.csv"));
    std::string line;
    std::getline(levels, line);
    CHECK(line == "sz,spin,lambda,xi");
    double prev_xi = -1.0, lambda_sum = 0.0;
    int rows = 0;
    while (std::getline(levels, line)) {
        double sz, spin, lambda, xi;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &sz, &spin, &lambda, &xi) == 4);
        CHECK(xi >= prev_xi - 1e-15);
        prev_xi = xi;
        lambda_sum += lambda;
        ++rows;
    }
    CHECK(rows == static_cast<int>(r.levels.size()));
    CHECK(lambda_sum + r.discarded_weight == doctest::Approx(1.0).epsilon(1e-10));

    const std::string report = slurp(dir.path / "fit_report.txt");
    CHECK(report.find("chosen_N = " + std::to_string(r.fit.chosen_n)) != std::string::npos);
    CHECK(report.find("entanglement entropy") != std::string::npos);

    const std::string meta = slurp(dir.path / "run_meta.json");
    CHECK(meta.find("\"chosen_N\"") != std::string::npos);
    CHECK(meta.find("\"timings\"") != std::string::npos);

    // scatter files carry one x,y row per tower point
    std::istringstream scatter(slurp(dir.path / "scatter_N3.csv"));
    std::getline(scatter, line);
    CHECK(line == "x,y");
    int srows = 0;
    while (std::getline(scatter, line)) ++srows;
    CHECK(srows == static_cast<int>(r.tower.points.size()));
}

TEST_CASE("identical config and seed reproduce artifacts bit for bit") {
    TempDir dir_a("estower_rep_a");
    TempDir dir_b("estower_rep_b");
    RunConfig a = small_dimer(dir_a.path.string());
    RunConfig b = small_dimer(dir_b.path.string());
    run_pipeline(a);
    run_pipeline(b);
    CHECK(slurp(dir_a.path / "levels.csv") == slurp(dir_b.path / "levels.csv"));
    CHECK(slurp(dir_a.path / "fit_report.txt") == slurp(dir_b.path / "fit_report.txt"));
    CHECK(slurp(dir_a.path / "tower.csv") == slurp(dir_b.path / "tower.csv"));
}

TEST_CASE("4x4 Heisenberg point classifies as N = 3") {
    TempDir dir("estower_o3");
    RunConfig cfg;
    cfg.model.model = Model::dimer;
    cfg.lx = 4;
    cfg.ly = 4;
    cfg.cut = "row:0";
    cfg.out = dir.path.string();
    const PipelineResult r = run_pipeline(cfg);
    CHECK(r.fit.chosen_n == 3);
    CHECK(r.singlet_norm >= 0);
    CHECK(r.singlet_norm < 1e-8);
    CHECK(r.rdm_trace == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dense check passes at n = 8 and refuses larger lattices") {
    TempDir dir("estower_dense");
    RunConfig cfg = small_dimer(dir.path.string());
    cfg.dense_check = true;
    const PipelineResult r = run_pipeline(cfg);
    CHECK(r.dense.e0_diff <= 1e-10);
    CHECK(r.dense.rdm_spectrum_diff <= 1e-10);

    RunConfig big = cfg;
    big.lx = 4;
    big.ly = 4;
    CHECK_THROWS_AS(run_pipeline(big), config_error);
}

TEST_CASE("nlow records a low-energy ladder") {
    TempDir dir("estower_nlow");
    RunConfig cfg = small_dimer(dir.path.string());
    cfg.nlow = 3;
    const PipelineResult r = run_pipeline(cfg);
    REQUIRE(r.low_energies.size() == 3);
    CHECK(r.low_energies[0] <= r.low_energies[1] + 1e-12);
    CHECK(r.low_energies[1] <= r.low_energies[2] + 1e-12);
}

TEST_CASE("odd subsystems run with half-integer spins") {
    TempDir dir("estower_odd");
    RunConfig cfg;
    cfg.model.model = Model::dimer;
    cfg.lx = 2;
    cfg.ly = 6;
    cfg.cut = "sites:0,1,2,3,4";   // |A| = 5, tower spins 1/2, 3/2, 5/2
    cfg.out = dir.path.string();
    const PipelineResult r = run_pipeline(cfg);
    REQUIRE(r.tower.points.size() == 3);
    CHECK(r.tower.points[0].s == doctest::Approx(0.5));
    CHECK(r.tower.points[2].s == doctest::Approx(2.5));
    CHECK(std::abs(r.tower.block_sz) == doctest::Approx(0.5));
    for (const EsLevel& l : r.levels)
        CHECK(std::abs(l.spin - (std::round(l.spin - 0.5) + 0.5)) < 1e-9);
    CHECK(r.fit.chosen_n >= 3);
}

TEST_CASE("failed runs leave a FAILED marker and no stale meta") {
    TempDir dir("estower_fail");
    RunConfig cfg = small_dimer(dir.path.string());
    cfg.max_iter = 2;   // cannot converge
    CHECK_THROWS_AS(run_pipeline(cfg), convergence_error);
    CHECK(fs::exists(dir.path / "FAILED"));
    CHECK_FALSE(fs::exists(dir.path / "run_meta.json"));
}

TEST_CASE("cli: success, config errors, and table mode") {
    TempDir dir("estower_cli");
    std::string output;

    const int ok = run_cli("--model dimer --lx 4 --ly 2 --cut row:0 --out " +
                               (dir.path / "run").string(),
                           output);
    CHECK(ok == 0);
    CHECK(output.find("chosen_N") != std::string::npos);
    CHECK(fs::exists(dir.path / "run" / "levels.csv"));

    const int bad = run_cli("--model dimer --lx 4 --ly 4 --cut row:9 --out " +
                                (dir.path / "bad").string(),
                            output);
    CHECK(bad == 2);
    CHECK(output.find("error: category=config") != std::string::npos);

    const int missing = run_cli("--model dimer --lx 4 --ly 4", output);
    CHECK(missing == 2);

    const int unconverged = run_cli("--model dimer --lx 4 --ly 2 --cut row:0 --max-iter 2 --out " +
                                        (dir.path / "noconv").string(),
                                    output);
    CHECK(unconverged == 3);
    CHECK(output.find("error: category=convergence") != std::string::npos);

    const int table = run_cli("--table1 --N 5 --Jmax 4", output);
    CHECK(table == 0);
    CHECK(output.find("5,2,14,0,3,3") != std::string::npos);   // N,J,dim,S,mult,states
    CHECK(output.find("5,4,55,0,5,5") != std::string::npos);

    // config file + flag override precedence
    const fs::path cfg_path = dir.path / "run.cfg";
    fs::create_directories(dir.path);
    {
        std::ofstream out(cfg_path);
        out << "model = dimer\nlx = 4\nly = 2\ncut = row:0\nseed = 7\n";
    }
    const int with_file = run_cli("--config " + cfg_path.string() + " --out " +
                                      (dir.path / "file_run").string(),
                                  output);
    CHECK(with_file == 0);
    const std::string meta = slurp(dir.path / "file_run" / "run_meta.json");
    CHECK(meta.find("\"seed\": 7") != std::string::npos);

    const int overridden = run_cli("--config " + cfg_path.string() + " --seed 9 --out " +
                                       (dir.path / "override_run").string(),
                                   output);
    CHECK(overridden == 0);
    const std::string meta2 = slurp(dir.path / "override_run" / "run_meta.json");
    CHECK(meta2.find("\"seed\": 9") != std::string::npos);
}

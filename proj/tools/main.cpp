#include "estower/config.hpp"
#include "estower/errors.hpp"
#include "estower/grouptheory.hpp"
#include "estower/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::string one_line(std::string msg) {
    for (char& c : msg)
        if (c == '\n') c = ' ';
    return msg;
}

void print_error(const char* category, const std::string& msg) {
    std::cerr << "error: category=" << category << " message=\"" << one_line(msg) << "\"\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement-spectrum tower-of-states symmetry detector"};

    std::string config_path;
    std::optional<std::string> model, cut, out;
    std::optional<int> lx, ly, max_iter, nlow;
    std::optional<double> j1, j2, j, q, smax, tol, lambda_floor;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<int>> candidates;
    bool dense_check = false, cbjq_single_pairing = false;
    bool table1 = false;
    int table_n = 5, table_jmax = 4;

    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--model", model, "dimer|jq3|cbjq");
    app.add_option("--lx", lx, "lattice extent along x (even)");
    app.add_option("--ly", ly, "lattice extent along y (even)");
    app.add_option("--j1", j1, "dimer weak-bond coupling");
    app.add_option("--j2", j2, "dimer strong-bond coupling");
    app.add_option("--j", j, "jq3/cbjq pair coupling");
    app.add_option("--q", q, "jq3/cbjq multi-spin coupling");
    app.add_option("--cut", cut, "subsystem: row:<y> or sites:<list>");
    app.add_option("--candidates", candidates, "candidate N values")->delimiter(',');
    app.add_option("--smax", smax, "highest tower spin (0 = auto)");
    app.add_option("--tol", tol, "eigensolver residual tolerance");
    app.add_option("--max-iter", max_iter, "eigensolver iteration budget");
    app.add_option("--seed", seed, "start-vector seed");
    app.add_option("--lambda-floor", lambda_floor, "drop RDM weights below this");
    app.add_option("--out", out, "output directory");
    app.add_flag("--dense-check", dense_check, "diff against the brute-force path (n <= 12)");
    app.add_option("--nlow", nlow, "number of lowest eigenpairs (diagnostic)");
    app.add_flag("--cbjq-single-pairing", cbjq_single_pairing,
                 "emit only the horizontal pairing per cbjq plaquette");
    app.add_flag("--table1", table1, "print SO(N) branching tables and exit");
    app.add_option("--N", table_n, "branching table group label")->capture_default_str();
    app.add_option("--Jmax", table_jmax, "branching table maximal J")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        print_error("config", e.what());
        return 2;
    }

    try {
        if (table1) {
            std::cout << estower::format_branching_text(table_n, table_jmax) << "\n";
            std::cout << estower::format_branching_csv(table_n, table_jmax);
            return 0;
        }

        estower::RunConfig cfg;
        if (!config_path.empty()) cfg = estower::parse_config_file(config_path);
        if (model) cfg.model.model = estower::model_from_name(*model);
        if (lx) cfg.lx = *lx;
        if (ly) cfg.ly = *ly;
        if (j1) cfg.model.j1 = *j1;
        if (j2) cfg.model.j2 = *j2;
        if (j) cfg.model.j = *j;
        if (q) cfg.model.q = *q;
        if (cut) cfg.cut = *cut;
        if (candidates) cfg.candidates = *candidates;
        if (smax) cfg.smax = *smax;
        if (tol) cfg.tol = *tol;
        if (max_iter) cfg.max_iter = *max_iter;
        if (seed) cfg.seed = *seed;
        if (lambda_floor) cfg.lambda_floor = *lambda_floor;
        if (out) cfg.out = *out;
        if (dense_check) cfg.dense_check = true;
        if (nlow) cfg.nlow = *nlow;
        if (cbjq_single_pairing) cfg.cbjq_single_pairing = true;

        const estower::PipelineResult r = estower::run_pipeline(cfg);
        std::cout << "chosen_N = " << r.fit.chosen_n << " (e0 = " << r.e0 << ", entropy = "
                  << r.entropy << ")\n";
        std::cout << "artifacts in " << cfg.out << "\n";
        return 0;
    } catch (const estower::config_error& e) {
        print_error("config", e.what());
        return 2;
    } catch (const estower::convergence_error& e) {
        print_error("convergence", e.what());
        return 3;
    } catch (const estower::numerical_error& e) {
        print_error("numerical", e.what());
        return 4;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}

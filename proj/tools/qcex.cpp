// Command-line driver: analyze / check / solve / purify an instance file,
// or write one of the built-in demo instances.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qcex/analysis.hpp"
#include "qcex/fixtures.hpp"
#include "qcex/io.hpp"
#include "qcex/oracle.hpp"
#include "qcex/rounding.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadFile = 2;
constexpr int kExitSolverFailure = 3;

struct GlobalOptions {
    double tol_gap = 1e-8;
    double tol_feas = 1e-8;
    double tol_eig = 1e-8;
    std::uint64_t seed = 0;
};

qcex::AnalysisOptions make_options(const GlobalOptions& g) {
    qcex::AnalysisOptions opt;
    opt.solver.tol_gap = g.tol_gap;
    opt.solver.tol_feas = g.tol_feas;
    opt.gamma.tol_eig = g.tol_eig;
    opt.gamma.tol_psd = g.tol_eig;
    opt.seed = g.seed;
    opt.oracle.seed = g.seed;
    return opt;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write to " + path);
    out << j.dump(2) << "\n";
}

int run_analyze(const std::string& path, const GlobalOptions& g, bool with_oracle, int starts,
                const std::string& json_path, bool conditions_only) {
    const qcex::InstanceFile file = qcex::load_instance(path);
    for (const std::string& w : file.warnings) std::cerr << "warning: " << w << "\n";

    qcex::AnalysisOptions opt = make_options(g);
    opt.run_oracle = with_oracle;
    opt.oracle.starts = starts;
    opt.run_shor = !conditions_only;
    opt.run_socp = !conditions_only;

    const qcex::AnalysisResult res =
        qcex::analyze(file.instance, file.gamma_assert ? &*file.gamma_assert : nullptr, opt);
    qcex::print_report(std::cout, res);
    if (!json_path.empty()) write_json(json_path, qcex::report_to_json(res));
    if (!conditions_only && res.shor.status != qcex::SolveStatus::optimal)
        return kExitSolverFailure;
    return kExitOk;
}

int run_solve(const std::string& path, const GlobalOptions& g, const std::string& json_path) {
    const qcex::InstanceFile file = qcex::load_instance(path);
    qcex::AnalysisOptions opt = make_options(g);
    const qcex::ShorSolution sol = qcex::solve_shor(file.instance, opt.solver);
    std::cout << "status:  " << qcex::to_string(sol.status) << "\n";
    std::cout << "Opt_SDP: " << sol.opt_sdp << "\n";
    nlohmann::json j = {{"status", qcex::to_string(sol.status)},
                        {"opt_sdp", sol.opt_sdp},
                        {"gap", sol.gap},
                        {"x", qcex::detail::vector_to_json(sol.x)}};
    if (qcex::is_diagonal_instance(file.instance)) {
        const qcex::SocpSolution socp = qcex::solve_socp(file.instance, opt.solver);
        std::cout << "Opt_SOCP: " << socp.opt_socp << " (" << qcex::to_string(socp.status)
                  << ")\n";
        j["opt_socp"] = socp.opt_socp;
    }
    if (!json_path.empty()) write_json(json_path, j);
    return sol.status == qcex::SolveStatus::optimal ? kExitOk : kExitSolverFailure;
}

int run_purify(const std::string& path, const GlobalOptions& g, const std::string& variant,
               const std::string& json_path) {
    const qcex::InstanceFile file = qcex::load_instance(path);
    qcex::AnalysisOptions opt = make_options(g);
    opt.solver.tol_gap = std::min(opt.solver.tol_gap, 1e-9);

    const qcex::MultiplicityReport k = qcex::detect_k(file.instance);
    const qcex::ShorSolution sol = qcex::solve_shor(file.instance, opt.solver);
    if (sol.status != qcex::SolveStatus::optimal) {
        std::cerr << "error: relaxation solve did not reach optimality\n";
        return kExitSolverFailure;
    }
    const qcex::PurifyVariant v = (variant == "hull") ? qcex::PurifyVariant::hull
                                                      : qcex::PurifyVariant::optimal_slice;
    const qcex::ConvexDecomposition dec =
        qcex::purify_rank_reduction(file.instance, k, sol, v, opt.purify);
    const qcex::DecompositionReport rep = qcex::verify_decomposition(
        file.instance, dec, {sol.x, 0.5 * sol.opt_sdp}, opt.purify.tol_feas);

    std::cout << "variant: " << variant << ", k = " << k.k << ", leaves = " << dec.points.size()
              << "\n";
    std::cout << "verification: " << (rep.ok ? "passed" : "FAILED") << " (reconstruction "
              << rep.reconstruction_error << ", worst leaf residual " << rep.worst_leaf_residual
              << ")\n";
    for (std::size_t i = 0; i < dec.points.size(); ++i)
        std::cout << "  leaf " << i << ": weight " << dec.weights[i] << ", objective "
                  << qcex::evaluate(file.instance, 0, dec.points[i].x) << "\n";

    if (!json_path.empty()) {
        nlohmann::json j;
        j["variant"] = variant;
        j["k"] = k.k;
        j["opt_sdp"] = sol.opt_sdp;
        j["verified"] = rep.ok;
        nlohmann::json leaves = nlohmann::json::array();
        for (std::size_t i = 0; i < dec.points.size(); ++i)
            leaves.push_back({{"weight", dec.weights[i]},
                              {"x", qcex::detail::vector_to_json(dec.points[i].x)},
                              {"t", dec.points[i].t}});
        j["leaves"] = leaves;
        write_json(json_path, j);
    }
    return rep.ok ? kExitOk : kExitSolverFailure;
}

int run_demo(const std::string& name, std::string out_path, int qmp_n, int qmp_k, int qmp_m,
             int ps_n, int ps_k, std::uint64_t seed) {
    qcex::QcqpInstance inst;
    std::optional<std::vector<qcex::HalfSpace>> gamma_assert;
    if (name == "k2-example") {
        inst = qcex::fixtures::k2_example();
    } else if (name == "b-zero") {
        inst = qcex::fixtures::b_zero();
    } else if (name == "gamma-ineq-triangle") {
        inst = qcex::fixtures::gamma_ineq_triangle();
        std::vector<qcex::HalfSpace> rows(3);
        rows[0].coeffs = -qcex::Vector::Ones(2);
        rows[0].rhs = -1.0;
        rows[1].coeffs = qcex::Vector::Unit(2, 0);
        rows[1].rhs = 0.0;
        rows[2].coeffs = qcex::Vector::Unit(2, 1);
        rows[2].rhs = 0.0;
        gamma_assert = rows;
    } else if (name == "polyhedral-sharp") {
        inst = qcex::fixtures::polyhedral_sharp(ps_n, ps_k);
    } else if (name == "circle-sharp") {
        inst = qcex::fixtures::circle_sharp();
    } else if (name == "optimality") {
        inst = qcex::fixtures::optimality();
    } else if (name == "separating-by") {
        inst = qcex::fixtures::separating_by();
    } else if (name == "qmp") {
        inst = qcex::fixtures::qmp(qmp_n, qmp_k, qmp_m, seed);
    } else {
        std::cerr << "error: unknown demo name '" << name << "'\n";
        return kExitBadFile;
    }
    if (out_path.empty()) out_path = name + ".json";
    write_json(out_path, qcex::instance_to_json(inst, gamma_assert ? &*gamma_assert : nullptr));
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exactness analysis of the semidefinite relaxation of QCQPs"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--tol-gap", g.tol_gap, "relative duality gap tolerance");
    app.add_option("--tol-feas", g.tol_feas, "relative feasibility tolerance");
    app.add_option("--tol-eig", g.tol_eig, "eigenvalue zero threshold");
    app.add_option("--seed", g.seed, "random seed for sampling components");

    std::string path, json_path, demo_name, variant = "hull";
    bool with_oracle = false;
    int starts = 256;
    int qmp_n = 2, qmp_k = 4, qmp_m = 2, ps_n = 2, ps_k = 1;
    std::string demo_out;

    CLI::App* analyze = app.add_subcommand("analyze", "full pipeline on an instance file");
    analyze->add_option("path", path)->required();
    analyze->add_option("--json", json_path, "write the JSON report here");
    analyze->add_flag("--oracle", with_oracle, "also run the multistart search bound");
    analyze->add_option("--starts", starts, "multistart budget for the search bound");

    CLI::App* check = app.add_subcommand("check", "condition checkers only");
    check->add_option("path", path)->required();
    check->add_option("--json", json_path, "write the JSON report here");

    CLI::App* solve = app.add_subcommand("solve", "relaxation value only");
    solve->add_option("path", path)->required();
    solve->add_option("--json", json_path, "write the JSON report here");

    CLI::App* purify = app.add_subcommand("purify", "rank-reduction decomposition");
    purify->add_option("path", path)->required();
    purify->add_option("--variant", variant, "hull or slice")
        ->check(CLI::IsMember({"hull", "slice"}));
    purify->add_option("--json", json_path, "write the JSON report here");

    CLI::App* demo = app.add_subcommand("demo", "write a built-in instance file");
    demo->add_option("name", demo_name,
                     "k2-example | b-zero | gamma-ineq-triangle | polyhedral-sharp | "
                     "circle-sharp | optimality | separating-by | qmp")
        ->required();
    demo->add_option("-o,--output", demo_out, "output path (default <name>.json)");
    demo->add_option("--qmp-n", qmp_n, "matrix-program block size");
    demo->add_option("--qmp-k", qmp_k, "matrix-program multiplicity");
    demo->add_option("--qmp-m", qmp_m, "matrix-program constraint count");
    demo->add_option("--ps-n", ps_n, "sharpness construction block size");
    demo->add_option("--ps-k", ps_k, "sharpness construction multiplicity");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(path, g, with_oracle, starts, json_path, false);
        if (check->parsed()) return run_analyze(path, g, false, starts, json_path, true);
        if (solve->parsed()) return run_solve(path, g, json_path);
        if (purify->parsed()) return run_purify(path, g, variant, json_path);
        if (demo->parsed())
            return run_demo(demo_name, demo_out, qmp_n, qmp_k, qmp_m, ps_n, ps_k, g.seed);
    } catch (const qcex::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadFile;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitOk;
}

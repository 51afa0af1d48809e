// Command-line front end: risk values, optimal sets, stability probes, the
// claim-verification suite, and boundary-mesh export.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hedgemap/diagnostics.hpp"
#include "hedgemap/mesh.hpp"
#include "hedgemap/model.hpp"
#include "hedgemap/solver.hpp"
#include "hedgemap/verify.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;

struct ModelArgs {
    std::string name = "basic";
    std::string file;
};

hedgemap::AdmissibleTriple load_model(const ModelArgs& args) {
    if (!args.file.empty()) {
        std::ifstream in(args.file);
        if (!in) throw std::invalid_argument("cannot read model file: " + args.file);
        nlohmann::json j;
        in >> j;
        return hedgemap::triple_from_json(j);
    }
    if (args.name == "basic") return hedgemap::basic_triple();
    if (args.name == "twisted") return hedgemap::twisted_triple();
    throw std::invalid_argument("unknown model '" + args.name +
                                "' (use --model-file for custom models)");
}

bool parse_point(const std::string& text, hedgemap::Point3& out) {
    std::istringstream ss(text);
    char c1 = 0, c2 = 0;
    if (!(ss >> out.x1 >> c1 >> out.x2 >> c2 >> out.x3)) return false;
    if (c1 != ',' || c2 != ',') return false;
    std::string rest;
    ss >> rest;
    return rest.empty() && hedgemap::is_finite(out);
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

nlohmann::json point_json(const hedgemap::Point3& p) {
    return {p.x1, p.x2, p.x3};
}

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--model", args.name, "basic | twisted");
    cmd->add_option("--model-file", args.file, "JSON model descriptor");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HEDGEMAP_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

void warn_custom(const hedgemap::AdmissibleTriple& triple) {
    if (triple.canonical) return;
    const auto cert = hedgemap::certify_triple(triple, 2000, default_seed());
    if (!cert.no_arbitrage) std::cerr << "warning: custom model fails no-arbitrage\n";
    if (!cert.convexity_ok) std::cerr << "warning: custom model body is not convex\n";
    if (!cert.monotone_ok)
        std::cerr << "warning: custom model fails the cone monotonicity check\n";
    for (const auto& w : cert.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << "note: custom model certified empirically; Lipschitz estimate "
              << fmt12(cert.lipschitz_estimate) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convex risk engine: optimal values, optimal sets, stability probes"};
    app.require_subcommand(1);

    ModelArgs rho_model, opt_model, lsc_model, sel_model, mesh_model;
    std::string rho_x, opt_x, lsc_x = "0,0,0";
    bool rho_prerot = false, opt_prerot = false, lsc_prerot = false;
    std::string opt_out, lsc_out, sel_out, verify_out, mesh_out, outline_out;
    int lsc_n = 100, sel_n = 200;
    std::uint64_t seed = default_seed();
    int mesh_resolution = 64;
    double mesh_r = 0.0;

    CLI::App* rho_cmd = app.add_subcommand("rho", "optimal value at a position");
    add_model_options(rho_cmd, rho_model);
    rho_cmd->add_option("--x", rho_x, "position x1,x2,x3")->required();
    rho_cmd->add_flag("--pre-rotated", rho_prerot,
                      "interpret --x in pre-rotation coordinates");

    CLI::App* opt_cmd = app.add_subcommand("optset", "optimal set at a position (JSON)");
    add_model_options(opt_cmd, opt_model);
    opt_cmd->add_option("--x", opt_x, "position x1,x2,x3")->required();
    opt_cmd->add_flag("--pre-rotated", opt_prerot,
                      "interpret --x in pre-rotation coordinates");
    opt_cmd->add_option("--out", opt_out, "write JSON here instead of stdout");

    CLI::App* lsc_cmd =
        app.add_subcommand("probe-lsc", "solution-set collapse along a sequence");
    add_model_options(lsc_cmd, lsc_model);
    lsc_cmd->add_option("--n", lsc_n, "number of terms")->check(CLI::PositiveNumber);
    lsc_cmd->add_option("--x", lsc_x, "base position (default 0,0,0)");
    lsc_cmd->add_flag("--pre-rotated", lsc_prerot,
                      "interpret --x in pre-rotation coordinates");
    lsc_cmd->add_option("--out", lsc_out, "output prefix for .json/.csv");

    CLI::App* sel_cmd =
        app.add_subcommand("probe-selection", "forced-selection oscillation");
    add_model_options(sel_cmd, sel_model);
    sel_cmd->add_option("--n", sel_n, "number of terms")->check(CLI::PositiveNumber);
    sel_cmd->add_option("--out", sel_out, "output prefix for .json/.csv");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the full claim-certification suite");
    verify_cmd->add_option("--seed", seed, "sampling seed")->envname("HEDGEMAP_SEED");
    verify_cmd->add_option("--out", verify_out, "write the JSON report here");

    CLI::App* mesh_cmd = app.add_subcommand("mesh", "export a boundary mesh (CSV)");
    add_model_options(mesh_cmd, mesh_model);
    mesh_cmd->add_option("--r", mesh_r, "override the shape parameter");
    mesh_cmd->add_option("--resolution", mesh_resolution, "grid resolution (>= 8)")
        ->check(CLI::Range(8, 4096));
    mesh_cmd->add_option("--out", mesh_out, "mesh CSV path")->required();
    mesh_cmd->add_option("--outline", outline_out, "also write the 2D profile outline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitParse;
    }

    try {
        if (rho_cmd->parsed()) {
            hedgemap::Point3 x;
            if (!parse_point(rho_x, x)) {
                std::cerr << "error: --x expects three comma-separated reals\n";
                return kExitParse;
            }
            const auto triple = load_model(rho_model);
            warn_custom(triple);
            if (rho_prerot) x = triple.rotation().apply(x);
            const auto res = hedgemap::rho_eval(x, triple);
            std::cout << "rho = " << fmt12(res.value) << "\n";
            std::cout << "path = " << (res.band_path ? "band" : "general") << "\n";
            return 0;
        }

        if (opt_cmd->parsed()) {
            hedgemap::Point3 x;
            if (!parse_point(opt_x, x)) {
                std::cerr << "error: --x expects three comma-separated reals\n";
                return kExitParse;
            }
            const auto triple = load_model(opt_model);
            warn_custom(triple);
            if (opt_prerot) x = triple.rotation().apply(x);
            const auto set = hedgemap::optimal_set(x, triple);
            nlohmann::json j;
            j["rho"] = set.rho;
            j["w1_interval"] = {set.w1.lo, set.w1.hi};
            j["w3_star"] = set.w3_star;
            j["singleton"] = set.singleton;
            j["endpoints"] = {point_json(set.endpoint_lo), point_json(set.endpoint_hi)};
            // Where the hedged position touches the acceptance set.
            j["support_points"] = {point_json(set.endpoint_lo + x),
                                   point_json(set.endpoint_hi + x)};
            j["path"] = set.band_path ? "band" : "general";
            if (opt_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(opt_out);
                if (!out) {
                    std::cerr << "error: cannot write " << opt_out << "\n";
                    return kExitParse;
                }
                out << j.dump(2) << "\n";
            }
            return 0;
        }

        if (lsc_cmd->parsed()) {
            hedgemap::Point3 x;
            if (!parse_point(lsc_x, x)) {
                std::cerr << "error: --x expects three comma-separated reals\n";
                return kExitParse;
            }
            const auto triple = load_model(lsc_model);
            warn_custom(triple);
            if (lsc_prerot) x = triple.rotation().apply(x);
            hedgemap::SequenceSpec seq;
            seq.kind = hedgemap::SequenceKind::basic_lsc;
            seq.n_max = lsc_n;
            seq.shift = x;
            const auto report = hedgemap::lsc_probe(x, seq, triple);
            std::cout << "gap = " << fmt12(report.gap) << "\n";
            if (!lsc_out.empty()) {
                std::ofstream js(lsc_out + ".json");
                std::ofstream cs(lsc_out + ".csv");
                if (!js || !cs) {
                    std::cerr << "error: cannot write " << lsc_out << ".{json,csv}\n";
                    return kExitParse;
                }
                js << hedgemap::lsc_report_to_json(report).dump(2) << "\n";
                hedgemap::write_lsc_csv(cs, report);
            }
            return 0;
        }

        if (sel_cmd->parsed()) {
            const auto triple = load_model(sel_model);
            warn_custom(triple);
            hedgemap::SequenceSpec seq;
            seq.kind = triple.name == "basic"
                           ? hedgemap::SequenceKind::basic_lsc
                           : hedgemap::SequenceKind::twisted_alternating;
            seq.n_max = sel_n;
            const auto report = hedgemap::selection_oscillation(seq, triple);
            std::cout << "oscillation = " << fmt12(report.oscillation) << "\n";
            if (!sel_out.empty()) {
                std::ofstream js(sel_out + ".json");
                std::ofstream cs(sel_out + ".csv");
                if (!js || !cs) {
                    std::cerr << "error: cannot write " << sel_out << ".{json,csv}\n";
                    return kExitParse;
                }
                js << hedgemap::selection_report_to_json(report).dump(2) << "\n";
                hedgemap::write_selection_csv(cs, report);
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            const auto results = hedgemap::run_all_claims(seed);
            hedgemap::print_claim_summary(std::cout, results);
            if (!verify_out.empty()) {
                std::ofstream out(verify_out);
                if (!out) {
                    std::cerr << "error: cannot write " << verify_out << "\n";
                    return kExitParse;
                }
                out << hedgemap::claims_to_json(results, seed).dump(2) << "\n";
            }
            return hedgemap::all_pass(results) ? 0 : 1;
        }

        if (mesh_cmd->parsed()) {
            auto triple = load_model(mesh_model);
            hedgemap::BoatSet set = triple.boat;
            if (mesh_r > 0.0) set.r = mesh_r;
            std::ofstream out(mesh_out);
            if (!out) {
                std::cerr << "error: cannot write " << mesh_out << "\n";
                return kExitParse;
            }
            hedgemap::write_boat_mesh_csv(out, set, mesh_resolution);
            if (!outline_out.empty()) {
                std::ofstream oout(outline_out);
                if (!oout) {
                    std::cerr << "error: cannot write " << outline_out << "\n";
                    return kExitParse;
                }
                hedgemap::write_profile_outline_csv(oout, set.profile, mesh_resolution);
            }
            return 0;
        }
    } catch (const hedgemap::SolverInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return 0;
}

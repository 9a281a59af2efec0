#include "quiverforge/cli_core.hpp"

#include "quiverforge/charvar.hpp"
#include "quiverforge/json_io.hpp"
#include "quiverforge/moment_flow.hpp"
#include "quiverforge/segre.hpp"
#include "quiverforge/tensor_rep.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace quiverforge {

namespace {

struct RunConfig {
    double tol = 1e-10;
    double flow_tol = 1e-8;
    long max_iters = 50'000;
    std::uint64_t seed = 12345;
    double step = 0.05;
    int kappa = -1;
    std::string input = "-";
    std::string out_path;
    bool emit_rep = false;
};

Json read_input(const RunConfig& cfg, std::istream& in) {
    if (cfg.input == "-") return Json::parse(in);
    std::ifstream f(cfg.input);
    require(f.good(), "cannot open input file '" + cfg.input + "'");
    return Json::parse(f);
}

void emit(const RunConfig& cfg, std::ostream& out, const Json& j) {
    std::string text = dump_json17(j, 1);
    if (cfg.out_path.empty()) {
        out << text << "\n";
    } else {
        std::ofstream f(cfg.out_path);
        require(f.good(), "cannot open output file '" + cfg.out_path + "'");
        f << text << "\n";
    }
}

std::vector<double> doubles_from(const Json& j, const char* what) {
    require(j.is_array(), std::string(what) + ": expected an array");
    return j.get<std::vector<double>>();
}

Permutation permutation_from_words(const std::string& text) {
    std::istringstream is(text);
    std::vector<int> images;
    int x;
    while (is >> x) images.push_back(x);
    return Permutation::from_one_line(std::move(images));
}

Json flow_report_to_json(const FlowReport& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["kappa"] = r.kappa;
    j["cycle_trace_drift"] = r.cycle_trace_drift;
    return j;
}

StabilityData stability_from_json(const Json& j, const DimensionVector& dims) {
    std::vector<double> theta = doubles_from(j.at("theta"), "theta");
    std::vector<double> sigma;
    if (j.contains("sigma")) sigma = doubles_from(j.at("sigma"), "sigma");
    return make_stability(std::move(theta), dims, std::move(sigma));
}

int cmd_euler(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Quiver q = quiver_from_json(j.at("quiver"));
    DimensionVector d = j.at("d").get<DimensionVector>();
    DimensionVector e = j.contains("e") ? j.at("e").get<DimensionVector>() : d;
    emit(cfg, out, Json{{"euler_form", euler_form(q, d, e)}});
    return 0;
}

int cmd_paths(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    QuiverPtr q = share(quiver_from_json(j.at("quiver")));
    auto paths = enumerate_paths(q, j.at("from").get<int>(), j.at("to").get<int>(),
                                 j.at("max_len").get<int>());
    Json list = Json::array();
    for (const Path& p : paths) list.push_back(p.edges());
    emit(cfg, out, Json{{"count", paths.size()}, {"paths", std::move(list)}});
    return 0;
}

int cmd_tensor_quiver(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    TensorQuiverMap tq =
        tensor_quiver(quiver_from_json(j.at("q1")), quiver_from_json(j.at("q2")));
    Json pairs = Json::array();
    for (auto& [a, b] : tq.vertex_pairs) pairs.push_back(Json::array({a, b}));
    Json origins = Json::array();
    for (auto& o : tq.edge_origins)
        origins.push_back(Json{
            {"factor", o.factor}, {"edge", o.factor_edge}, {"other_vertex", o.other_vertex}});
    emit(cfg, out,
         Json{{"quiver", quiver_to_json(*tq.product)},
              {"vertex_pairs", std::move(pairs)},
              {"edge_origins", std::move(origins)}});
    return 0;
}

int cmd_tensor_rep(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation a = representation_from_json(j.at("rep1"));
    Representation b = representation_from_json(j.at("rep2"));
    TensorRepresentation t = tensor(a, b);
    Json result = representation_to_json(t.rep);
    Json rels = Json::array();
    for (const Relation& r : t.ideal.relations) rels.push_back(relation_to_json(r));
    result["relations"] = std::move(rels);
    emit(cfg, out, result);
    return 0;
}

int cmd_dual(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.contains("rep") ? j.at("rep") : j);
    emit(cfg, out, representation_to_json(dual(rep)));
    return 0;
}

int cmd_ops(const RunConfig& cfg, const std::string& op, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    std::optional<Representation> rep;
    Quiver q;
    if (j.contains("rep")) {
        rep = representation_from_json(j.at("rep"));
        q = *rep->quiver();
    } else {
        q = quiver_from_json(j.at("quiver"));
    }

    QuiverOpRecord rec = [&] {
        if (op == "collapse-vertices")
            return collapse_vertices(q, j.at("groups").get<std::vector<std::vector<int>>>());
        if (op == "collapse-edges")
            return collapse_edges(q, j.at("bundle").get<std::vector<int>>());
        if (op == "clone") return clone_vertex(q, j.at("vertex").get<int>());
        if (j.contains("vertex")) return delete_vertex(q, j.at("vertex").get<int>());
        return delete_edge(q, j.at("edge").get<int>());
    }();

    Json result;
    result["quiver"] = quiver_to_json(rec.result);
    result["vertex_map"] = rec.vertex_map;
    result["edge_map"] = rec.edge_map;
    if (rep) result["rep"] = representation_to_json(restrict_along(*rep, rec));
    if (j.contains("theta")) {
        DimensionVector dims = rep ? rep->dims() : DimensionVector(q.num_vertices(), 1);
        if (j.contains("dims")) dims = j.at("dims").get<DimensionVector>();
        StabilityData s = stability_from_json(j, dims);
        double tau = j.contains("tau") ? j.at("tau").get<double>() : 0.0;
        StabilityData moved = transported_theta_op(rec, s, dims, tau);
        result["theta"] = moved.theta;
        result["sigma"] = moved.sigma;
        result["theta_prime"] = moved.theta_prime;
    }
    emit(cfg, out, result);
    return 0;
}

int cmd_check_relations(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.at("rep"));
    std::vector<Relation> rels;
    for (const auto& r : j.at("relations")) rels.push_back(relation_from_json(r, rep.quiver()));
    RelationCheck check = satisfies_relations(rep, rels, cfg.tol);
    emit(cfg, out, Json{{"satisfied", check.ok}, {"residuals", check.residuals}});
    return 0;
}

int cmd_check_stability(const RunConfig& cfg, bool thin, std::istream& in, std::ostream& out) {
    require(thin, "check-stability: only --thin classification is implemented");
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.at("rep"));
    StabilityData s = stability_from_json(j, rep.dims());
    ThinStabilityResult r = thin_stability(rep, s);
    Json result;
    result["verdict"] = to_string(r.verdict);
    result["witness"] = r.witness;
    result["witness_slope"] = r.witness_slope;
    result["total_slope"] = r.total_slope;
    emit(cfg, out, result);
    return 0;
}

FlowConfig flow_config(const RunConfig& cfg) {
    FlowConfig fc;
    fc.tol = cfg.flow_tol;
    fc.max_iters = cfg.max_iters;
    fc.step = cfg.step;
    fc.seed = cfg.seed;
    return fc;
}

int cmd_flow(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.at("rep"));
    const char* key = j.contains("theta_prime") ? "theta_prime" : "theta";
    std::vector<double> theta_prime = doubles_from(j.at(key), "theta_prime");
    auto [limit, report] = kempf_ness_flow(rep, theta_prime, flow_config(cfg), cfg.kappa);
    Json result = flow_report_to_json(report);
    if (cfg.emit_rep) result["rep"] = representation_to_json(limit);
    emit(cfg, out, result);
    return report.status == FlowStatus::converged ? 0 : 3;
}

int cmd_certify(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.at("rep"));
    std::vector<double> theta = doubles_from(j.at("theta"), "theta");
    CertifyResult r = certify_polystable(rep, theta, flow_config(cfg), cfg.kappa);
    Json result;
    result["verdict"] = to_string(r.verdict);
    result["kappa"] = cfg.kappa;
    result["report"] = flow_report_to_json(r.report);
    result["end_dim_input"] = r.end_dim_input;
    result["end_dim_limit"] = r.end_dim_limit;
    if (cfg.emit_rep) result["rep"] = representation_to_json(r.limit);
    emit(cfg, out, result);
    return r.verdict == PolystabilityVerdict::inconclusive ? 3 : 0;
}

int cmd_verify_tensor(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation a = representation_from_json(j.at("rep1"));
    Representation b = representation_from_json(j.at("rep2"));
    std::vector<double> ta = doubles_from(j.at("theta_prime1"), "theta_prime1");
    std::vector<double> tb = doubles_from(j.at("theta_prime2"), "theta_prime2");
    TensorPolystabilityReport r = verify_tensor_polystability(a, ta, b, tb, cfg.tol, cfg.kappa);
    Json result;
    result["ok"] = r.ok;
    result["precondition_ok"] = r.precondition_ok;
    result["residual_a"] = r.residual_a;
    result["residual_b"] = r.residual_b;
    result["tensor_residual"] = r.tensor_residual;
    result["bound"] = r.bound;
    result["kappa"] = cfg.kappa;
    emit(cfg, out, result);
    return 0;
}

int cmd_tangent_dim(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.at("rep"));
    std::vector<double> theta_prime = doubles_from(j.at("theta_prime"), "theta_prime");
    int dim = moduli_tangent_dim(rep, theta_prime, cfg.kappa, 1e-6);
    long long euler = euler_form(*rep.quiver(), rep.dims(), rep.dims());
    Json result;
    result["tangent_dim_real"] = dim;
    result["euler_smooth_expected"] = 2 * (1 - euler);
    result["kappa"] = cfg.kappa;
    emit(cfg, out, result);
    return 0;
}

int cmd_segre_check(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Representation rep = representation_from_json(j.contains("rep") ? j.at("rep") : j);
    SegreMembership r = in_segre_image(rep, cfg.tol > 0 ? cfg.tol : 1e-10);
    Json z = Json::array(), w = Json::array();
    for (int i = 0; i < r.z.size(); ++i) z.push_back(complex_to_json(r.z(i)));
    for (int i = 0; i < r.w.size(); ++i) w.push_back(complex_to_json(r.w(i)));
    emit(cfg, out,
         Json{{"quadric_residual", r.quadric_residual},
              {"diagonal_residual", r.diagonal_residual},
              {"in_image", r.in_image},
              {"factors", Json{{"z", std::move(z)}, {"w", std::move(w)}}}});
    return 0;
}

std::vector<int> parse_dims(const std::string& text) {
    std::istringstream is(text);
    std::vector<int> dims;
    int x;
    while (is >> x) dims.push_back(x);
    return dims;
}

int cmd_charvar_tau(const RunConfig& cfg, const std::string& sigma, const std::string& sigma_p,
                    int n, int m, const std::string& dims_text, const std::string& sigmas_text,
                    std::ostream& out) {
    if (!dims_text.empty()) {
        std::vector<int> dims = parse_dims(dims_text);
        std::vector<Permutation> sigmas;
        std::istringstream is(sigmas_text);
        std::string word;
        // r-fold: sigmas given as comma-separated one-line words.
        std::string group;
        std::vector<std::string> groups;
        for (char c : sigmas_text) {
            if (c == ',') {
                groups.push_back(group);
                group.clear();
            } else {
                group += c;
            }
        }
        if (!group.empty()) groups.push_back(group);
        for (const auto& g : groups) sigmas.push_back(permutation_from_words(g));
        emit(cfg, out, Json{{"tau", tau_r(dims, sigmas).one_line()}});
        return 0;
    }
    Permutation s = sigma.empty() ? Permutation::identity(n) : permutation_from_words(sigma);
    Permutation sp = sigma_p.empty() ? Permutation::identity(m) : permutation_from_words(sigma_p);
    emit(cfg, out, Json{{"tau", tau(n, m, s, sp).one_line()}});
    return 0;
}

int cmd_charvar_phi(const RunConfig& cfg, const std::string& poly_path, int n, int m,
                    const std::string& dims_text, std::istream& in, std::ostream& out) {
    RunConfig read_cfg = cfg;
    read_cfg.input = poly_path.empty() ? cfg.input : poly_path;
    Json j = read_input(read_cfg, in);
    SymPoly p = sympoly_from_json(j.contains("poly") ? j.at("poly") : j);
    SymPoly image = dims_text.empty() ? phi_substitute(p, n, m)
                                      : phi_substitute_r(p, parse_dims(dims_text));
    emit(cfg, out, sympoly_to_json(image));
    return 0;
}

int cmd_charvar_grid(const RunConfig& cfg, const std::string& pairs_path, int n, int m,
                     const std::string& dims_text, double grid_tol, std::istream& in,
                     std::ostream& out) {
    RunConfig read_cfg = cfg;
    read_cfg.input = pairs_path.empty() ? cfg.input : pairs_path;
    Json j = read_input(read_cfg, in);

    std::vector<std::vector<std::complex<double>>> tuples;
    const Json& source = j.contains("tuples") ? j.at("tuples")
                        : j.contains("pairs") ? j.at("pairs")
                                              : j;
    for (const auto& t : source) {
        std::vector<std::complex<double>> tuple;
        for (const auto& c : t) tuple.push_back(complex_from_json(c));
        tuples.push_back(std::move(tuple));
    }
    std::vector<int> dims = !dims_text.empty() ? parse_dims(dims_text)
                            : j.contains("dims") ? j.at("dims").get<std::vector<int>>()
                                                 : std::vector<int>{n, m};
    GridTestResult r = grid_test_r(tuples, dims, grid_tol);
    Json factors = Json::array();
    for (const auto& f : r.factors) {
        Json one = Json::array();
        for (const auto& c : f) one.push_back(complex_to_json(c));
        factors.push_back(std::move(one));
    }
    emit(cfg, out, Json{{"in_grid", r.ok}, {"factors", std::move(factors)}});
    return 0;
}

int cmd_charvar_invariants(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    Json j = read_input(cfg, in);
    Mat a = matrix_from_json(j.contains("matrix") ? j.at("matrix") : j);
    Json list = Json::array();
    for (const auto& c : char_poly_invariants(a)) list.push_back(complex_to_json(c));
    emit(cfg, out, Json{{"invariants", std::move(list)}});
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    if (const char* threads = std::getenv("QUIVERFORGE_THREADS")) {
        int n = std::atoi(threads);
        if (n >= 1) Eigen::setNbThreads(n);
    }

    CLI::App app{"quiverforge: quiver representations, stability and moment-map flows"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--tol", cfg.tol, "residual tolerance for checks");
    app.add_option("--flow-tol", cfg.flow_tol, "convergence tolerance for flows");
    app.add_option("--max-iters", cfg.max_iters, "flow iteration cap");
    app.add_option("--seed", cfg.seed, "seed for randomized internals");
    app.add_option("--step", cfg.step, "initial flow step size");
    app.add_option("--kappa", cfg.kappa, "vortex sign convention (+1 or -1)")
        ->check(CLI::IsMember({-1, 1}));
    app.add_option("--out", cfg.out_path, "write output JSON to a file instead of stdout");

    std::string op_input = "-";
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", op_input, "input JSON file, or - for stdin");
    };

    auto* euler = app.add_subcommand("euler", "Euler form <d,e> of a quiver");
    add_input(euler);
    auto* paths = app.add_subcommand("paths", "enumerate bounded-length paths");
    add_input(paths);
    auto* tq = app.add_subcommand("tensor-quiver", "tensor product of two quivers");
    add_input(tq);
    auto* trep = app.add_subcommand("tensor-rep", "tensor product of two representations");
    add_input(trep);
    auto* dualc = app.add_subcommand("dual", "dual representation on the opposite quiver");
    add_input(dualc);

    auto* ops = app.add_subcommand("ops", "quiver operations with restriction of scalars");
    ops->require_subcommand(1);
    std::vector<std::string> op_names = {"collapse-vertices", "collapse-edges", "clone", "delete"};
    for (const auto& name : op_names) add_input(ops->add_subcommand(name));

    auto* rels = app.add_subcommand("check-relations", "relation residuals of a representation");
    add_input(rels);

    bool thin = false;
    auto* stab = app.add_subcommand("check-stability", "stability classification");
    stab->add_flag("--thin", thin, "thin representation classification (required)");
    add_input(stab);

    auto* flow = app.add_subcommand("flow", "Kempf-Ness gradient flow");
    flow->add_flag("--emit-rep", cfg.emit_rep, "include the flow limit in the output");
    add_input(flow);
    auto* certify = app.add_subcommand("certify", "polystability certificate via the flow");
    certify->add_flag("--emit-rep", cfg.emit_rep, "include the flow limit in the output");
    add_input(certify);
    auto* vtp = app.add_subcommand("verify-tensor-polystability",
                                   "vortex residual of a tensor of two solutions");
    add_input(vtp);
    auto* tdim = app.add_subcommand("tangent-dim", "moduli tangent dimension at a solution");
    add_input(tdim);
    auto* segre = app.add_subcommand("segre-check", "Segre relations of a thin diamond");
    add_input(segre);

    auto* charv = app.add_subcommand("charvar", "character variety toolkit");
    charv->require_subcommand(1);
    int cv_n = 1, cv_m = 1;
    std::string cv_sigma, cv_sigma_p, cv_dims, cv_sigmas, cv_poly, cv_pairs;
    double cv_grid_tol = 1e-6;
    auto* cv_tau = charv->add_subcommand("tau", "product permutation in S_{nm}");
    cv_tau->add_option("--n", cv_n);
    cv_tau->add_option("--m", cv_m);
    cv_tau->add_option("--sigma", cv_sigma, "one-line permutation of {1..n}");
    cv_tau->add_option("--sigma-prime", cv_sigma_p, "one-line permutation of {1..m}");
    cv_tau->add_option("--dims", cv_dims, "r-fold dimensions, space separated");
    cv_tau->add_option("--sigmas", cv_sigmas, "r-fold one-line permutations, comma separated");
    auto* cv_phi = charv->add_subcommand("phi", "substitution morphism on invariants");
    cv_phi->add_option("--poly", cv_poly, "SymPoly JSON file");
    cv_phi->add_option("--n", cv_n);
    cv_phi->add_option("--m", cv_m);
    cv_phi->add_option("--dims", cv_dims);
    add_input(cv_phi);
    auto* cv_grid = charv->add_subcommand("grid", "grid membership of a joint spectrum");
    cv_grid->add_option("--pairs", cv_pairs, "pairs/tuples JSON file");
    cv_grid->add_option("--n", cv_n);
    cv_grid->add_option("--m", cv_m);
    cv_grid->add_option("--dims", cv_dims);
    cv_grid->add_option("--grid-tol", cv_grid_tol, "clustering tolerance");
    add_input(cv_grid);
    auto* cv_inv = charv->add_subcommand("invariants", "characteristic polynomial invariants");
    add_input(cv_inv);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream dummy_out;
        return app.exit(e, dummy_out, err);
    }

    cfg.input = op_input;
    try {
        if (euler->parsed()) return cmd_euler(cfg, in, out);
        if (paths->parsed()) return cmd_paths(cfg, in, out);
        if (tq->parsed()) return cmd_tensor_quiver(cfg, in, out);
        if (trep->parsed()) return cmd_tensor_rep(cfg, in, out);
        if (dualc->parsed()) return cmd_dual(cfg, in, out);
        if (ops->parsed())
            return cmd_ops(cfg, ops->get_subcommands().front()->get_name(), in, out);
        if (rels->parsed()) return cmd_check_relations(cfg, in, out);
        if (stab->parsed()) return cmd_check_stability(cfg, thin, in, out);
        if (flow->parsed()) return cmd_flow(cfg, in, out);
        if (certify->parsed()) return cmd_certify(cfg, in, out);
        if (vtp->parsed()) return cmd_verify_tensor(cfg, in, out);
        if (tdim->parsed()) return cmd_tangent_dim(cfg, in, out);
        if (segre->parsed()) return cmd_segre_check(cfg, in, out);
        if (charv->parsed()) {
            CLI::App* sub = charv->get_subcommands().front();
            if (sub == cv_tau)
                return cmd_charvar_tau(cfg, cv_sigma, cv_sigma_p, cv_n, cv_m, cv_dims, cv_sigmas,
                                       out);
            if (sub == cv_phi) return cmd_charvar_phi(cfg, cv_poly, cv_n, cv_m, cv_dims, in, out);
            if (sub == cv_grid)
                return cmd_charvar_grid(cfg, cv_pairs, cv_n, cv_m, cv_dims, cv_grid_tol, in, out);
            if (sub == cv_inv) return cmd_charvar_invariants(cfg, in, out);
        }
        err << "unknown subcommand\n";
        return 2;
    } catch (const Json::exception& e) {
        Json diag{{"error", Json{{"type", "malformed_json"}, {"message", e.what()}}}};
        out << dump_json17(diag, 1) << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        Json diag{{"error", Json{{"type", "malformed_input"}, {"message", e.what()}}}};
        out << dump_json17(diag, 1) << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        Json diag{{"error", Json{{"type", "precondition"}, {"message", e.what()}}}};
        out << dump_json17(diag, 1) << "\n";
        return 2;
    } catch (const std::exception& e) {
        Json diag{{"error", Json{{"type", "runtime"}, {"message", e.what()}}}};
        out << dump_json17(diag, 1) << "\n";
        return 3;
    }
}

}  // namespace quiverforge

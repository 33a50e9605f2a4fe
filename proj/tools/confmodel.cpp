// confmodel command-line interface. Exit codes: 0 pass, 1 check failure, 2 input error.

#include "confmodel/framed_s2.hpp"
#include "confmodel/graph_complex.hpp"
#include "confmodel/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

using namespace confmodel;

namespace {

struct Common {
    bool json_out = false;
    bool no_timing = false;
    std::string output;
};

struct AlgebraSource {
    std::string builtin;
    std::string file;

    bool given() const { return !builtin.empty() || !file.empty(); }
    std::string describe() const { return !file.empty() ? "file:" + file : builtin; }
    PdAlgebra load() const {
        if (!builtin.empty() && !file.empty()) throw InputError("give either --builtin or --file, not both");
        if (!file.empty()) return load_algebra_file(file);
        if (builtin.empty()) throw InputError("an algebra is required (--builtin NAME or --file PATH)");
        try {
            return builtin_algebra(builtin);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    static PdAlgebra builtin_algebra(const std::string& s) { return confmodel::builtin(s); }
};

void add_algebra_options(CLI::App* c, AlgebraSource& src) {
    c->add_option("--builtin", src.builtin, "built-in algebra: sphere:N, cp:M, product:X,Y, point, fat_sphere3");
    c->add_option("--file", src.file, "algebra JSON file");
}

std::vector<std::string> g_argv;

int emit(const Common& opt, json report, double seconds) {
    if (!opt.no_timing) report["timing"] = {{"seconds", std::round(seconds * 1000.0) / 1000.0}};
    std::string text = opt.json_out ? report.dump(2) + "\n" : render_text(report);
    std::cout << text;
    if (!opt.output.empty()) {
        std::ofstream out(opt.output);
        if (!out) throw InputError("cannot write " + opt.output);
        out << report.dump(2) << "\n";
    }
    return report["pass"].get<bool>() ? 0 : 1;
}

void require_range(int v, int lo, int hi, const std::string& what) {
    if (v < lo || v > hi)
        throw InputError(what + " = " + std::to_string(v) + " is outside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

json diagonal_json(const PdAlgebra& A) {
    json terms = json::array();
    for (const auto& [p, c] : A.diagonal())
        terms.push_back({A.basis_name(p.first), A.basis_name(p.second), to_string(c)});
    return terms;
}

// --- pd ------------------------------------------------------------------

json cmd_pd(const std::string& action, const AlgebraSource& src) {
    json rep = make_report(g_argv, {{"algebra", src.describe()}});
    auto& r = rep["results"];
    if (action == "verify") {
        PdAlgebra::Data d;
        if (!src.file.empty()) {
            d = load_algebra_data(src.file);
        } else {
            d = src.load().data();
        }
        auto v = PdAlgebra::verify(d);
        r["valid"] = v.ok;
        if (!v.ok) {
            r["failure"] = v.message;
            rep["pass"] = false;
            return rep;
        }
        PdAlgebra A = PdAlgebra::make(d);
        auto dc = check_diagonal(A);
        r["n"] = A.n();
        r["dimension"] = A.dim();
        r["cohomology"] = poly_json(A.cohomology());
        r["euler_characteristic"] = A.euler();
        r["diagonal_cocycle"] = dc.cocycle;
        r["diagonal_symmetry"] = dc.symmetry;
        r["diagonal_transfer"] = dc.transfer;
        r["euler_identity"] = dc.euler;
        if (!dc.ok()) {
            r["failure"] = dc.witness;
            rep["pass"] = false;
        }
        return rep;
    }
    PdAlgebra A = src.load();
    if (action == "diagonal") {
        r["diagonal"] = tensor_string(A, A.diagonal());
        r["terms"] = diagonal_json(A);
        auto dc = check_diagonal(A);
        r["checks_pass"] = dc.ok();
        rep["pass"] = dc.ok();
    } else {
        auto dc = check_diagonal(A);
        r["euler_characteristic"] = A.euler();
        r["euler_class"] = element_string(A, A.euler_class());
        r["euler_identity"] = dc.euler;
        rep["pass"] = dc.euler;
    }
    return rep;
}

// --- ls ------------------------------------------------------------------

json cmd_ls(const std::string& action, const AlgebraSource& src, int k, int max_arity) {
    require_range(k, 0, max_arity, "arity k");
    if (action == "s3check") {
        if (src.given() && src.describe() != "sphere:3")
            throw InputError("s3check always uses sphere:3; do not pass another algebra");
        json rep = make_report(g_argv, {{"algebra", "sphere:3"}, {"k", k}});
        S3Comparison cmp(k);
        auto s = cmp.run();
        auto& r = rep["results"];
        r["well_defined"] = s.well_defined;
        r["chain_map"] = s.chain_map;
        r["quasi_isomorphism"] = s.quasi_iso;
        r["domain_betti"] = poly_json(s.domain);
        r["target_betti"] = poly_json(s.target_betti);
        json ranks = json::object();
        for (const auto& [d, rk] : s.induced_rank) ranks[std::to_string(d)] = rk;
        r["induced_rank"] = ranks;
        rep["pass"] = s.ok();
        return rep;
    }
    PdAlgebra A = src.load();
    json rep = make_report(g_argv, {{"algebra", src.describe()}, {"k", k}});
    auto& r = rep["results"];
    if (action == "betti") {
        auto cx = ls_complex(A, k);
        r["dimensions"] = poly_json(cx.dimension_poly());
        r["betti"] = poly_json(cx.betti());
        r["betti_text"] = cx.betti().str();
    } else if (action == "d2check") {
        auto cx = ls_complex(A, k);
        auto v = cx.verify();
        r["dimensions"] = poly_json(cx.dimension_poly());
        r["d_squared_zero"] = v.ok;
        if (!v.ok) {
            json f = json::array();
            for (const auto& x : v.failures) f.push_back({x.degree, x.witness_column});
            r["failures"] = f;
            if (!v.structural_error.empty()) r["structural_error"] = v.structural_error;
        }
        rep["pass"] = v.ok;
    } else {
        if (A.euler() != 0)
            throw InputError("the comodule structure needs Euler characteristic 0, but chi(A) = " +
                             std::to_string(A.euler()));
        auto c = check_comodule_chain_map(A, k);
        auto a = check_comodule_coassociative(A, k);
        r["chain_map"] = c.ok;
        r["chain_map_checked"] = c.checked;
        r["coassociative"] = a.ok;
        r["coassociativity_checked"] = a.checked;
        if (!c.ok) r["chain_map_witness"] = c.witness;
        if (!a.ok) r["coassociativity_witness"] = a.witness;
        rep["pass"] = c.ok && a.ok;
    }
    return rep;
}

// --- graphs ----------------------------------------------------------------

struct GraphOpts {
    int n = 0;
    int externals = 2;
    int max_internal = 3;
    int max_edges = 6;
    int max_vertices = 6;
    int cap_internal = 3;
    int cap_edges = 6;
    std::string flavor;
};

json cmd_graphs(const std::string& action, const AlgebraSource& src, const GraphOpts& g) {
    if (g.n < 2) throw InputError("--n must be at least 2");
    if (action == "audit") {
        require_range(g.max_vertices, 2, 8, "max-vertices");
        PdAlgebra A = src.given() ? src.load() : sphere(g.n);
        json rep = make_report(g_argv, {{"n", g.n}, {"max_vertices", g.max_vertices},
                                         {"algebra", src.given() ? src.describe() : "sphere:" + std::to_string(g.n)}});
        auto a = vanishing_audit(g.n, g.max_vertices, A);
        auto& r = rep["results"];
        r["enumerated"] = a.enumerated;
        r["max_edges"] = a.max_edges;
        if (a.min_degree) r["min_degree"] = *a.min_degree;
        else r["min_degree"] = nullptr;
        r["asserted"] = a.asserted;
        r["witnesses"] = a.witnesses;
        rep["pass"] = a.ok;
        return rep;
    }
    require_range(g.externals, 0, 4, "externals");
    require_range(g.max_internal, 0, g.cap_internal, "max-internal");
    require_range(g.max_edges, 0, g.cap_edges, "max-edges");
    GraphFlavor fl;
    if (g.flavor.empty()) {
        fl = src.given() ? GraphFlavor::Labeled : GraphFlavor::Unlabeled;
    } else {
        try {
            fl = parse_flavor(g.flavor);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    std::optional<PdAlgebra> A;
    if (fl == GraphFlavor::Labeled) {
        A = src.load();
        if (A->n() != g.n)
            throw InputError("labeled graphs need an algebra of dimension n = " + std::to_string(g.n) + ", got " +
                             std::to_string(A->n()));
    } else if (src.given()) {
        throw InputError("the unlabeled flavor takes no algebra");
    }
    auto U = range_vertices(g.externals);
    GraphSpace S = A ? GraphSpace(*A, U) : GraphSpace(g.n, U);
    GraphBounds b{g.max_internal, g.max_edges};
    json rep = make_report(g_argv, {{"n", g.n},
                                     {"flavor", A ? "graphs_A" : "graphs_n"},
                                     {"algebra", A ? src.describe() : "none"},
                                     {"externals", g.externals},
                                     {"max_internal", g.max_internal},
                                     {"max_edges", g.max_edges}});
    auto& r = rep["results"];
    auto gs = enumerate_graphs(S, b);
    r["graphs"] = static_cast<long long>(gs.size());
    if (action == "d2") {
        auto d2 = check_graph_d2(S, gs);
        r["d_squared_zero"] = d2.ok;
        if (!d2.ok) r["witness"] = d2.witness;
        bool ok = d2.ok;
        if (A) {
            auto e = check_eps_compatibility(S, b);
            r["eps_reduction_compatible"] = e.ok;
            r["eps_checked"] = e.checked;
            if (!e.ok) r["eps_witness"] = e.witness;
            ok = ok && e.ok;
        }
        rep["pass"] = ok;
    } else if (action == "chainmap") {
        auto c = A ? check_rho_chain_map(S, gs) : check_en_projection(S, gs);
        r[A ? "rho_star_chain_map" : "en_projection_chain_map"] = c.ok;
        r["checked"] = c.checked;
        if (!c.ok) r["witness"] = c.witness;
        bool ok = c.ok;
        if (A) {
            auto de = check_dead_end_cancellation(*A);
            r["dead_end_cancellation"] = de.ok;
            if (!de.ok) r["dead_end_witness"] = de.witness;
            ok = ok && de.ok;
        }
        rep["pass"] = ok;
    } else {
        auto gb = graded_graph_basis(S, gs);
        auto cx = build_complex(gb, [&](const Graph& x) { return S.d(x); });
        r["dimensions"] = poly_json(cx.dimension_poly());
        json basis = json::object(), mats = json::array();
        for (const auto& [deg, v] : gb.by_degree) {
            json names = json::array();
            for (const auto& x : v) names.push_back(S.graph_string(x));
            basis[std::to_string(deg)] = names;
        }
        for (const auto& [deg, m] : cx.differentials()) {
            json e = matrix_json(m);
            e["degree"] = deg;
            mats.push_back(e);
        }
        r["basis"] = basis;
        r["differentials"] = mats;
    }
    return rep;
}

// --- framed ----------------------------------------------------------------

json cmd_framed(const std::string& action, int k, int max_arity) {
    require_range(k, 0, max_arity, "arity k");
    json rep = make_report(g_argv, {{"algebra", "sphere:2"}, {"k", k}});
    auto& r = rep["results"];
    if (action == "betti") {
        auto cx = framed_complex(k);
        r["dimensions"] = poly_json(cx.dimension_poly());
        r["betti"] = poly_json(cx.betti());
        r["betti_text"] = cx.betti().str();
        r["euler_characteristic"] = cx.dimension_poly().euler();
    } else if (action == "d2") {
        auto cx = framed_complex(k);
        auto v = cx.verify();
        r["dimensions"] = poly_json(cx.dimension_poly());
        r["d_squared_zero"] = v.ok;
        r["euler_characteristic"] = cx.dimension_poly().euler();
        rep["pass"] = v.ok;
    } else {
        auto c = check_framed_comodule(k);
        r["chain_map"] = c.chain_map;
        r["coassociative"] = c.coassociative;
        r["counit"] = c.counit;
        r["checked"] = c.checked;
        if (!c.ok()) r["witness"] = c.witness;
        rep["pass"] = c.ok();
    }
    return rep;
}

// --- ce --------------------------------------------------------------------

json cmd_ce(const std::string& action, const AlgebraSource& src, int k, int max_arity, const std::string& lie,
            const std::string& lie_file, int cap) {
    PdAlgebra A = src.load();
    if (action == "pair-check") {
        require_range(k, 0, max_arity, "arity k");
        json rep = make_report(g_argv, {{"algebra", src.describe()}, {"k", k}});
        auto p = pairing_checks(A, k);
        auto& r = rep["results"];
        r["square"] = p.square;
        r["full_rank"] = p.full_rank;
        r["chain_compatible"] = p.chain_compatible;
        r["partition_mismatch_zero"] = p.partition_mismatch_zero;
        r["ce_d_squared_zero"] = p.ce_d2;
        r["pairs_checked"] = p.pairs_checked;
        json ranks = json::object();
        for (const auto& [d, sr] : p.ranks) ranks[std::to_string(d)] = {{"size", sr.first}, {"rank", sr.second}};
        r["ranks_by_ls_degree"] = ranks;
        if (!p.ok()) r["witness"] = p.witness;
        rep["pass"] = p.ok();
        return rep;
    }
    if (lie.empty() == lie_file.empty()) throw InputError("give exactly one of --lie or --lie-file");
    if (cap < 1) throw InputError("--cap must be at least 1");
    FiniteLieAlgebra g;
    if (!lie_file.empty()) {
        g = load_lie_file(lie_file);
    } else {
        try {
            g = builtin_lie(lie);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    json rep = make_report(g_argv, {{"algebra", src.describe()}, {"lie", lie.empty() ? "file:" + lie_file : lie},
                                     {"cap", cap}});
    auto h = ce_homology(A, g, cap);
    auto& r = rep["results"];
    r["word_length_cap"] = cap;
    r["chain_dimensions"] = poly_json(h.dims);
    r["homology"] = poly_json(h.homology);
    r["homology_text"] = h.homology.str();
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) g_argv.push_back(argv[i]);
    CLI::App app{"Models of configuration spaces: LS algebras, graph complexes, framed S^2, CE pairing"};
    app.require_subcommand(1);
    app.fallthrough();
    Common opt;
    app.add_flag("--json", opt.json_out, "print the JSON report");
    app.add_flag("--no-timing", opt.no_timing, "omit timing from the report");
    app.add_option("-o,--output", opt.output, "also write the JSON report to this file");

    AlgebraSource src;
    std::string action;
    int k = 0, max_arity = 6, ce_max_arity = 4, cap = 4;
    GraphOpts gopt;
    std::string lie, lie_file;

    auto* pd = app.add_subcommand("pd", "Poincaré duality algebras");
    pd->add_option("action", action, "verify | diagonal | euler")
        ->required()
        ->check(CLI::IsMember({"verify", "diagonal", "euler"}));
    add_algebra_options(pd, src);

    auto* ls = app.add_subcommand("ls", "LS model G_A(k)");
    ls->add_option("action", action, "betti | d2check | comodule-check | s3check")
        ->required()
        ->check(CLI::IsMember({"betti", "d2check", "comodule-check", "s3check"}));
    add_algebra_options(ls, src);
    ls->add_option("-k,--arity", k, "arity")->required();
    ls->add_option("--max-arity", max_arity, "arity cap")->capture_default_str();

    auto* gr = app.add_subcommand("graphs", "graph complexes");
    gr->add_option("action", action, "d2 | chainmap | audit | export")
        ->required()
        ->check(CLI::IsMember({"d2", "chainmap", "audit", "export"}));
    add_algebra_options(gr, src);
    gr->add_option("--n", gopt.n, "dimension n")->required();
    gr->add_option("--flavor", gopt.flavor, "graphs_n | graphs_A (default: graphs_A when an algebra is given)");
    gr->add_option("--externals", gopt.externals, "number of external vertices")->capture_default_str();
    gr->add_option("--max-internal", gopt.max_internal, "internal vertex bound")->capture_default_str();
    gr->add_option("--max-edges", gopt.max_edges, "edge bound")->capture_default_str();
    gr->add_option("--max-vertices", gopt.max_vertices, "vertex bound for audit")->capture_default_str();
    gr->add_option("--cap-internal", gopt.cap_internal, "largest accepted --max-internal")->capture_default_str();
    gr->add_option("--cap-edges", gopt.cap_edges, "largest accepted --max-edges")->capture_default_str();

    auto* fr = app.add_subcommand("framed", "framed model of S^2");
    fr->add_option("action", action, "betti | d2 | comodule")
        ->required()
        ->check(CLI::IsMember({"betti", "d2", "comodule"}));
    fr->add_option("-k,--arity", k, "arity")->required();
    fr->add_option("--max-arity", max_arity, "arity cap")->capture_default_str();

    auto* ce = app.add_subcommand("ce", "Chevalley-Eilenberg pairing and homology");
    ce->add_option("action", action, "pair-check | homology")
        ->required()
        ->check(CLI::IsMember({"pair-check", "homology"}));
    add_algebra_options(ce, src);
    ce->add_option("-k,--arity", k, "arity for pair-check");
    ce->add_option("--max-arity", ce_max_arity, "arity cap")->capture_default_str();
    ce->add_option("--lie", lie, "built-in Lie algebra: abelian:N, affine, sl2");
    ce->add_option("--lie-file", lie_file, "Lie algebra JSON file");
    ce->add_option("--cap", cap, "symmetric word-length cap")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto t0 = std::chrono::steady_clock::now();
        json rep;
        if (pd->parsed()) rep = cmd_pd(action, src);
        else if (ls->parsed()) rep = cmd_ls(action, src, k, max_arity);
        else if (gr->parsed()) rep = cmd_graphs(action, src, gopt);
        else if (fr->parsed()) rep = cmd_framed(action, k, max_arity);
        else rep = cmd_ce(action, src, k, ce_max_arity, lie, lie_file, cap);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return emit(opt, std::move(rep), secs);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

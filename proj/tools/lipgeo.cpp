// lipgeo: command-line front end.
//
// Exit codes: 0 yes/valid, 1 no/invalid, 2 input error, 3 inconclusive at the
// series resolution bound. Every JSON report echoes the effective config.

#include "CLI11.hpp"

#include "lipgeo/complex.hpp"
#include "lipgeo/complex_io.hpp"
#include "lipgeo/metriclab.hpp"
#include "lipgeo/metriclab_io.hpp"
#include "lipgeo/pizza.hpp"
#include "lipgeo/pizza_extract.hpp"
#include "lipgeo/realize.hpp"

#include <fstream>
#include <iostream>

using namespace lipgeo;
using io::json;

namespace {

enum Code { yes = 0, no = 1, input_error = 2, inconclusive = 3 };

struct Config {
    std::string command;
    std::vector<std::string> inputs;
    double tol = 0.05;
    double tmax = -6;  // log2 of the coarsest scale
    double tmin = -18;
    int levels = 7;
    int resolution = 64;
    std::uint64_t seed = 0;
    unsigned depth = 3;
    std::string format = "json";
    bool unoriented = false;
    std::string beta;
    std::string arcs;
    std::string decomposition;
    std::string mode = "full";
    int planes = 100;
    bool numeric = false;
    std::string out;

    SamplePlan plan() const {
        if (levels < 4) throw ParseError("--levels must be at least 4");
        if (!(tmin < tmax) || tmax > -1) throw ParseError("need --tmin < --tmax <= -1");
        SamplePlan p = SamplePlan::with_levels(tmax, tmin, levels);
        p.resolution = resolution;
        p.seed = seed;
        p.tol = tol;
        return p;
    }

    json to_json() const {
        json j = {{"inputs", inputs},         {"tol", tol},       {"tmax_log2", tmax},   {"tmin_log2", tmin},
                  {"levels", levels},         {"resolution", resolution}, {"seed", seed}, {"depth", depth},
                  {"format", format},         {"unoriented", unoriented}, {"mode", mode}, {"planes", planes},
                  {"max_exponent", to_string(Resolution::from_environment().max_exponent)}};
        if (!beta.empty()) j["beta"] = beta;
        if (!arcs.empty()) j["arcs"] = arcs;
        if (!decomposition.empty()) j["decomposition"] = decomposition;
        if (numeric) j["numeric"] = true;
        return j;
    }
};

struct Outcome {
    int code = yes;
    json result = json::object();
    std::string summary;
    std::string artifact;  // dot/svg text, or the primary JSON written by --out
};

HolderComplex load_complex(const std::string& path) { return io::complex_from_json(io::read_json_file(path)); }

GermModel load_model(const std::string& path) {
    try {
        return io::germ_model_from_json(io::read_json_file(path));
    } catch (const ModelError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Exponent beta_flag(const Config& c, const Exponent& fallback) {
    return c.beta.empty() ? fallback : Exponent::parse(c.beta);
}

Outcome canonicalize_cmd(const Config& c) {
    auto input = load_complex(c.inputs.at(0));
    auto canon = canonicalize(input);
    Outcome o;
    json classes = json::object();
    for (std::size_t v = 0; v < input.vertex_count(); ++v) classes[input.vertices()[v]] = to_string(classify_vertex(input, v));
    o.result = {{"canonical", io::to_json(canon)},
                {"input_is_canonical", is_canonical(input).canonical},
                {"input_vertex_classes", classes}};
    o.summary = "canonical complex: " + std::to_string(canon.vertex_count()) + " vertices, " +
                std::to_string(canon.edge_count()) + " edges";
    if (c.format == "dot") o.artifact = io::to_dot(canon, "canonical");
    else if (c.format == "svg") o.artifact = io::to_svg(canon);
    else o.artifact = io::to_json(canon).dump(2) + "\n";
    return o;
}

Outcome compare_inner_cmd(const Config& c) {
    auto r = equivalent(load_complex(c.inputs.at(0)), load_complex(c.inputs.at(1)));
    Outcome o;
    o.code = r.equivalent ? yes : no;
    o.result = {{"equivalent", r.equivalent},
                {"canonical_first", io::to_json(r.canonical_first)},
                {"canonical_second", io::to_json(r.canonical_second)}};
    if (r.witness) o.result["witness"] = io::to_json(*r.witness);
    o.summary = r.equivalent ? "inner Lipschitz equivalent" : "not equivalent";
    return o;
}

Outcome horn_cmd(const Config& c) {
    auto cx = load_complex(c.inputs.at(0));
    Outcome o;
    try {
        Exponent e = horn_exponent(cx);
        o.result = {{"horn", true}, {"exponent", e.str()}};
        o.summary = "horn exponent " + e.str();
        if (c.numeric) {
            auto est = horn_exponent_numeric(realize_model(cx).model, c.plan());
            o.result["numeric"] = io::to_json(est);
            o.summary += " (numeric " + std::to_string(est.exponent()) + ")";
        }
    } catch (const ComplexError& e) {
        o.code = no;
        o.result = {{"horn", false}, {"reason", e.what()}};
        o.summary = std::string("not a horn: ") + e.what();
    }
    return o;
}

Outcome realize_cmd(const Config& c) {
    auto rm = realize_model(load_complex(c.inputs.at(0)));
    Outcome o;
    json arcs = json::object();
    for (const auto& [v, a] : rm.vertex_arcs) arcs[v] = io::to_json(a);
    o.result = {{"model", io::to_json(rm.model)}, {"patch_edges", rm.patch_edges}, {"vertex_arcs", arcs}};
    o.summary = "germ model with " + std::to_string(rm.model.patches.size()) + " patches in R^" + std::to_string(rm.model.dim);
    o.artifact = io::to_json(rm.model).dump(2) + "\n";
    return o;
}

Outcome pizza_extract_cmd(const Config& c) {
    json j = io::read_json_file(c.inputs.at(0));
    bool wrapped = j.is_object() && j.contains("f");
    Expr f = io::expr_from_json(wrapped ? j.at("f") : j);
    Exponent beta = beta_flag(c, wrapped && j.contains("beta") ? io::exponent_from_json(j.at("beta")) : Exponent(1));
    ExtractOptions opt;
    opt.depth = c.depth;
    opt.res = Resolution::from_environment();
    Outcome o;
    try {
        auto e = extract_pizza(f, beta, opt);
        json centers = json::array(), scanned = json::array();
        for (const auto& s : e.centers) centers.push_back(io::to_json(s));
        for (const auto& s : e.scanned) scanned.push_back({{"w", io::to_json(s.w)}, {"order", s.order.str()}});
        o.result = {{"function", f.str()}, {"pizza", io::to_json(e.pizza)}, {"centers", centers}, {"scanned", scanned}};
        o.summary = std::to_string(e.pizza.slices.size()) + "-slice minimal pizza";
        o.artifact = io::to_json(e.pizza).dump(2) + "\n";
    } catch (const NonAdmissibleError& e) {
        o.code = no;
        o.result = {{"function", f.str()}, {"admissible", false}, {"reason", e.what()}};
        o.summary = std::string("extraction failed: ") + e.what();
    }
    return o;
}

Outcome pizza_compare_cmd(const Config& c) {
    auto a = io::pizza_from_json(io::read_json_file(c.inputs.at(0)));
    auto b = io::pizza_from_json(io::read_json_file(c.inputs.at(1)));
    for (const auto* p : {&a, &b})
        if (auto v = validate(*p); !v.empty()) throw ParseError("invalid pizza: " + v.front());
    bool eq = equivalent(a, b, !c.unoriented);
    Outcome o;
    o.code = eq ? yes : no;
    o.result = {{"equivalent", eq},
                {"oriented", !c.unoriented},
                {"minimal_first", io::to_json(minimalize(a))},
                {"minimal_second", io::to_json(minimalize(b))}};
    o.summary = eq ? "equivalent pizzas" : "not equivalent";
    return o;
}

std::vector<PointRef> arc_refs(const Config& c, const GermModel& m, const SamplePlan& plan) {
    if (c.arcs.empty()) {
        std::vector<PointRef> out;
        auto classes = boundary_arc_classes(m);
        std::set<std::size_t> seen;
        for (const auto& r : sample_arcs(m, 4)) {
            // Glued ends are one arc; keep the first copy.
            if (r.s == 0.0 || r.s == 1.0) {
                if (!m.patches[r.patch].is_arc() && !seen.insert(classes.at({r.patch, r.s == 0.0 ? 0 : 1})).second) continue;
            }
            out.push_back(r);
        }
        return out;
    }
    std::vector<PointRef> out;
    for (const auto& a : io::arc_family_from_json(io::read_json_file(c.arcs))) {
        try {
            out.push_back(locate(m, a, plan));
        } catch (const ModelError& e) {
            throw ParseError(c.arcs + ": " + e.what());
        }
    }
    return out;
}

Outcome verify_cmd(const Config& c) {
    auto m = load_model(c.inputs.at(0));
    auto plan = c.plan();
    Outcome o;
    if (!c.decomposition.empty()) {
        PancakeDecomposition d = io::pancake_decomposition_from_json(io::read_json_file(c.decomposition));
        PancakeReport r;
        try {
            r = pancake_check(m, d, plan);
        } catch (const ModelError& e) {
            throw ParseError(c.decomposition + ": " + e.what());
        }
        o.code = r.valid && r.minimal ? yes : no;
        o.result = io::to_json(r);
        o.summary = r.verdict();
        return o;
    }
    if (c.mode != "full" && c.mode != "weak") throw ParseError("--mode must be full or weak");
    LneMode mode = c.mode == "full" ? LneMode::full : LneMode::weak;
    std::optional<Exponent> beta;
    if (!c.beta.empty()) beta = Exponent::parse(c.beta);
    auto r = lne_report(m, arc_refs(c, m, plan), mode, beta, plan);
    o.code = r.passes() ? yes : no;
    o.result = io::to_json(r);
    if (r.passes()) {
        o.summary = std::string(mode == LneMode::full ? "LNE" : "weakly LNE") + ": no violation over " +
                    std::to_string(r.pairs.size()) + " pairs";
    } else {
        const auto violations = r.violations();
        const PairReport& w = violations.front();
        char buf[96];
        std::snprintf(buf, sizeof buf, "arcs %zu,%zu: tord %.3f vs itord %.3f", w.i, w.j, w.outer.exponent(), w.inner.exponent());
        o.summary = std::to_string(violations.size()) + " violation(s); first " + buf;
    }
    return o;
}

Outcome project_cmd(const Config& c) {
    if (c.beta.empty()) throw ParseError("project needs --beta (the horn exponent)");
    auto m = load_model(c.inputs.at(0));
    auto r = projection_experiment(m, Exponent::parse(c.beta), c.planes, c.seed, c.plan());
    Outcome o;
    o.result = io::to_json(r);
    o.summary = std::to_string(r.within) + "/" + std::to_string(r.estimates.size()) + " planes within " +
                std::to_string(c.tol) + " of " + c.beta;
    return o;
}

Outcome tangent_cmd(const Config& c) {
    auto m = load_model(c.inputs.at(0));
    auto plan = c.plan();
    auto r = tangent_cone_sample(m, plan);
    Outcome o;
    o.result = io::to_json(r);
    o.summary = std::to_string(r.rays) + " ray(s); decay " +
                (r.decay ? std::to_string(r.decay->exponent()) : std::string("converged"));
    if (c.format == "svg") {
        std::vector<std::size_t> axes;
        for (std::size_t i = 0; i < m.dim && axes.size() < 2; ++i)
            if (i != m.axis || m.dim == 2) axes.push_back(i);
        o.artifact = link_svg(m, plan.levels, plan, axes[0], axes[1]);
    }
    return o;
}

Outcome tord_cmd(const Config& c) {
    auto family = io::arc_family_from_json(io::read_json_file(c.inputs.at(0)));
    std::vector<Arc> arcs(family.begin(), family.end());
    json table = json::array();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < arcs.size(); ++j) row.push_back(i == j ? "inf" : arc_tord(arcs[i], arcs[j]).str());
        table.push_back(row);
    }
    Outcome o;
    o.result = {{"arcs", arcs.size()}, {"tord", table}};
    o.summary = "pairwise tangency orders of " + std::to_string(arcs.size()) + " arcs";
    return o;
}

void emit(const Config& c, int code, const json& result, const std::string& summary, const std::string& artifact) {
    if (!c.out.empty() && !artifact.empty()) {
        std::ofstream f(c.out);
        f << artifact;
    }
    if ((c.format == "dot" || c.format == "svg") && !artifact.empty() && c.out.empty()) {
        std::cout << artifact;
        return;
    }
    if (c.format == "text") {
        std::cout << c.command << ": " << summary << "\n";
        return;
    }
    json report = {{"command", c.command}, {"config", c.to_json()}, {"exit_code", code}, {"result", result}};
    std::cout << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-Lipschitz invariants of surface germs"};
    app.require_subcommand(1);
    Config cfg;

    auto common = [&](CLI::App* sub, bool numeric) {
        sub->add_option("--format", cfg.format, "json|text|dot|svg")->check(CLI::IsMember({"json", "text", "dot", "svg"}));
        sub->add_option("--out", cfg.out, "write the primary artifact to this file");
        sub->add_option("--depth", cfg.depth, "Newton-Puiseux terms per center arc");
        if (!numeric) return;
        sub->add_option("--tol", cfg.tol, "exponent tolerance");
        sub->add_option("--tmin", cfg.tmin, "log2 of the finest scale");
        sub->add_option("--tmax", cfg.tmax, "log2 of the coarsest scale");
        sub->add_option("--levels", cfg.levels, "number of scales");
        sub->add_option("--resolution", cfg.resolution, "link samples per patch")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
    };
    struct Command {
        const char* name;
        const char* help;
        int files;
        bool numeric;
        Outcome (*run)(const Config&);
    };
    const std::vector<Command> commands{
        {"canonicalize", "canonical Hölder complex", 1, false, canonicalize_cmd},
        {"compare-inner", "inner Lipschitz equivalence of two complexes", 2, false, compare_inner_cmd},
        {"horn", "horn exponent of a complex", 1, true, horn_cmd},
        {"realize", "germ model of a complex", 1, false, realize_cmd},
        {"pizza-extract", "minimal pizza of a function on a standard triangle", 1, false, pizza_extract_cmd},
        {"pizza-compare", "combinatorial equivalence of two pizzas", 2, false, pizza_compare_cmd},
        {"verify", "LNE, weak LNE or pancake check on a germ model", 1, true, verify_cmd},
        {"project", "generic projection experiment", 1, true, project_cmd},
        {"tangent", "tangent cone sampling", 1, true, tangent_cmd},
        {"tord", "pairwise tangency orders of arcs", 1, false, tord_cmd},
    };
    std::map<CLI::App*, const Command*> by_app;
    for (const auto& cmd : commands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        sub->add_option("files", cfg.inputs, "input file(s)")->required()->expected(cmd.files);
        common(sub, cmd.numeric);
        sub->add_option("--beta", cfg.beta, "exponent p/q or inf");
        if (std::string(cmd.name) == "pizza-compare") sub->add_flag("--unoriented", cfg.unoriented, "accept reversed orientation");
        if (std::string(cmd.name) == "verify") {
            sub->add_option("--arcs", cfg.arcs, "arc family file located on the model");
            sub->add_option("--decomposition", cfg.decomposition, "pancake decomposition file");
            sub->add_option("--mode", cfg.mode, "full|weak");
        }
        if (std::string(cmd.name) == "project") sub->add_option("--planes", cfg.planes, "number of random planes");
        if (std::string(cmd.name) == "horn") sub->add_flag("--numeric", cfg.numeric, "also estimate on the realized model");
        by_app[sub] = &cmd;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : input_error;
    }
    const Command* cmd = nullptr;
    for (const auto& [sub, c] : by_app)
        if (sub->parsed()) cmd = c;
    cfg.command = cmd->name;

    try {
        Outcome o = cmd->run(cfg);
        emit(cfg, o.code, o.result, o.summary, o.artifact);
        return o.code;
    } catch (const InconclusiveError& e) {
        // No partial answer accompanies an inconclusive result.
        json r = {{"inconclusive", e.what()}, {"resolution_bound", to_string(e.bound())}};
        emit(cfg, inconclusive, r, std::string("inconclusive: ") + e.what(), "");
        return inconclusive;
    } catch (const std::exception& e) {
        std::cerr << "lipgeo " << cfg.command << ": " << e.what() << "\n";
        try {
            emit(cfg, input_error, {{"error", e.what()}}, std::string("error: ") + e.what(), "");
        } catch (const std::exception&) {
        }
        return input_error;
    }
}

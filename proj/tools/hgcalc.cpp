#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hgcalc/ce.hpp"
#include "hgcalc/mc.hpp"
#include "hgcalc/morphism.hpp"
#include "hgcalc/reports.hpp"

using namespace hgcalc;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMath = 1;
constexpr int kExitInput = 2;

struct Options {
    std::string algebra;
    int n = 0;
    std::string deg = "-2:4";
    std::optional<int> max_edges;
    int k_max = 4;
    std::string format = "json";
    int threads = 0;
    std::string output;
    std::string config;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Options& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.output);
        if (!out) throw std::invalid_argument("cannot write '" + opt.output + "'");
        out << text;
    }
}

ModelPtr resolve_model(const std::string& source) {
    if (source.rfind("builtin:", 0) == 0) return build_builtin(source.substr(8));
    return load_model_json(source);
}

std::pair<int, int> parse_deg(const std::string& s) {
    auto colon = s.find(':', 1);  // allow a leading minus
    if (colon == std::string::npos) {
        int d = std::stoi(s);
        return {d, d};
    }
    int lo = std::stoi(s.substr(0, colon));
    int hi = std::stoi(s.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument("degree interval: " + s);
    return {lo, hi};
}

int effective_threads(const Options& opt) {
    if (opt.threads > 0) return opt.threads;
    if (const char* env = std::getenv("HGCALC_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

Ambient make_ambient(const Options& opt) {
    if (opt.algebra.empty()) throw std::invalid_argument("--algebra is required");
    if (opt.n == 0) throw std::invalid_argument("-n is required");
    if (opt.n < 4) std::cerr << "warning: n < 4 is outside the intended range\n";
    ModelPtr m = resolve_model(opt.algebra);
    auto issues = validate(*m);
    if (!issues.empty())
        throw std::invalid_argument("algebra fails validation: " + issues[0].rule + ": " +
                                    issues[0].detail);
    return Ambient{m, opt.n};
}

ComplexWindow window_for(const Options& opt, const Ambient& amb, int margin = 0) {
    auto [lo, hi] = parse_deg(opt.deg);
    WindowOptions wopt;
    wopt.d_min = lo - margin;
    wopt.d_max = hi + margin;
    wopt.edge_cap_override = opt.max_edges;
    wopt.threads = effective_threads(opt);
    return enumerate_basis(amb, wopt);
}

GraphVector load_vector(const std::string& path, const Ambient& amb, RingPtr ring) {
    return graphvector_from_json(slurp(path), amb, std::move(ring));
}

int cmd_algebra_validate(const Options& opt, const std::string& source) {
    ModelPtr m;
    try {
        m = resolve_model(source);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    auto issues = validate(*m);
    json j;
    j["model"] = m->name;
    j["valid"] = issues.empty();
    j["issues"] = json::array();
    for (auto& i : issues) j["issues"].push_back({{"rule", i.rule}, {"detail", i.detail}});
    emit(opt, j.dump(2) + "\n");
    return issues.empty() ? kExitOk : kExitMath;
}

int cmd_basis(const Options& opt) {
    Ambient amb = make_ambient(opt);
    ComplexWindow win = window_for(opt, amb);
    if (opt.format == "csv") {
        std::ostringstream os;
        os << "degree,dim,certified\n";
        for (auto& [d, b] : win.basis)
            os << d << "," << b.size() << "," << (win.certified.at(d) ? 1 : 0) << "\n";
        emit(opt, os.str());
    } else if (opt.format == "text") {
        std::ostringstream os;
        os << "basis of HGC(" << amb.model->name << ", n=" << amb.n << "), edges <= "
           << win.edge_cap << "\n";
        for (auto& [d, b] : win.basis) {
            os << "  degree " << d << ": dim " << b.size()
               << (win.certified.at(d) ? "" : " (uncertified)") << "\n";
            for (auto& g : b) os << "    " << graph_text(g, *amb.model) << "\n";
        }
        emit(opt, os.str());
    } else {
        emit(opt, basis_report(win, amb.model->name));
    }
    return kExitOk;
}

int cmd_homology(const Options& opt, const std::string& twist_path) {
    Ambient amb = make_ambient(opt);
    ComplexWindow win = window_for(opt, amb, 1);
    int threads = effective_threads(opt);

    std::map<int, SparseMatrix> mats;
    if (!twist_path.empty()) {
        GraphVector m = load_vector(twist_path, amb, CoefficientRing::rationals());
        if (!verify_mc(m)) {
            std::cerr << "error: twist element is not Maurer-Cartan\n";
            return kExitMath;
        }
        mats = twist(win, m, threads).mats;
    } else {
        mats = differential_matrices(win, threads);
    }

    auto [lo, hi] = parse_deg(opt.deg);
    std::map<int, HomologyResult> hom;
    for (int d = lo; d <= hi; ++d) hom[d] = homology_at(win, d, mats, true);

    ComplexWindow view = win;
    view.d_min = lo;
    view.d_max = hi;
    view.basis.erase(win.d_min + 0);
    view.basis.erase(win.d_max + 0);
    view.certified.erase(win.d_min + 0);
    view.certified.erase(win.d_max + 0);

    if (opt.format == "csv") {
        std::ostringstream os;
        os << "degree,dim,certified,homologyRank\n";
        for (auto& [d, h] : hom)
            os << d << "," << view.dim(d) << "," << (h.certified ? 1 : 0) << "," << h.rank
               << "\n";
        emit(opt, os.str());
    } else if (opt.format == "text") {
        std::ostringstream os;
        os << "homology of HGC(" << amb.model->name << ", n=" << amb.n << ")"
           << (twist_path.empty() ? "" : " twisted") << "\n";
        for (auto& [d, h] : hom) {
            os << "  H_" << d << " rank " << h.rank << (h.certified ? "" : " (uncertified)")
               << "\n";
            for (auto& rep : h.representatives) os << "    repr: " << rep.str() << "\n";
        }
        emit(opt, os.str());
    } else {
        emit(opt, window_report(view, hom, amb.model->name));
    }
    return kExitOk;
}

std::string describe_solutions(const std::vector<Obstruction>& obs, const RingPtr& ring) {
    std::ostringstream os;
    bool all_monomial = true, all_linear = true;
    for (auto& o : obs) {
        if (o.poly.terms().size() != 1) all_monomial = false;
        for (auto& [m, c] : o.poly.terms()) {
            int total = 0;
            for (int e : m) total += e;
            if (total > 1) all_linear = false;
        }
    }
    if (obs.empty()) return "every parameter value is Maurer-Cartan";
    if (all_monomial) {
        os << "solution set: ";
        for (std::size_t i = 0; i < obs.size(); ++i) {
            if (i) os << " and ";
            os << "(";
            auto& [m, c] = *obs[i].poly.terms().begin();
            bool first = true;
            for (std::size_t g = 0; g < m.size(); ++g) {
                if (m[g] == 0) continue;
                if (!first) os << " or ";
                os << ring->generators()[g].name << " = 0";
                first = false;
            }
            os << ")";
        }
        return os.str();
    }
    if (all_linear) return "linear system in the parameters; set the listed polynomials to 0";
    return "system is neither monomial nor linear; no solver provided";
}

int cmd_mc_classify(const Options& opt) {
    Ambient amb = make_ambient(opt);
    auto basis = degree_zero_tree_basis(amb);
    RingPtr ring;
    GraphVector cand = generic_mc_candidate(amb, basis, &ring);
    auto obs = mc_obstruction_system(cand, opt.k_max);
    std::string sol = basis.empty() ? "only the zero element" : describe_solutions(obs, ring);
    emit(opt, mc_report(amb, basis, obs, sol, {}));
    return kExitOk;
}

int cmd_mc_verify(const Options& opt, const std::string& element_path) {
    Ambient amb = make_ambient(opt);
    GraphVector m = load_vector(element_path, amb, CoefficientRing::rationals());
    bool ok = verify_mc(m);
    json j;
    j["model"] = amb.model->name;
    j["n"] = amb.n;
    j["maurerCartan"] = ok;
    emit(opt, j.dump(2) + "\n");
    return ok ? kExitOk : kExitMath;
}

int cmd_mc_gauge_check(const Options& opt, const std::string& path_file,
                       const std::string& from_file, const std::string& to_file) {
    Ambient amb = make_ambient(opt);
    RingPtr omega = CoefficientRing::interval_forms();
    json j;
    j["model"] = amb.model->name;
    j["n"] = amb.n;
    if (!path_file.empty()) {
        GraphVector p = load_vector(path_file, amb, omega);
        GaugeCheck res = gauge_path_check(p);
        j["pathVerifies"] = res.ok;
        j["endpoint0"] = json::parse(graphvector_to_json(res.endpoint0));
        j["endpoint1"] = json::parse(graphvector_to_json(res.endpoint1));
        emit(opt, j.dump(2) + "\n");
        return res.ok ? kExitOk : kExitMath;
    }
    if (from_file.empty() || to_file.empty())
        throw std::invalid_argument("gauge-check needs --path or both --from and --to");
    GraphVector m0 = load_vector(from_file, amb, CoefficientRing::rationals());
    GraphVector m1 = load_vector(to_file, amb, CoefficientRing::rationals());
    auto path = gauge_path_search(m0, m1, 2);
    j["pathFound"] = path.has_value();
    if (path) j["path"] = json::parse(graphvector_to_json(*path));
    emit(opt, j.dump(2) + "\n");
    return path ? kExitOk : kExitMath;
}

int cmd_utt_h0(const Options& opt) {
    Ambient amb = make_ambient(opt);
    UTTH0 h = utt_h0(amb);
    emit(opt, utt_report(amb, h, amb.model->name));
    return kExitOk;
}

LinfTable table_from_json(const std::string& text) {
    json j = json::parse(text);
    LinfTable t;
    for (auto& l : j.at("labels")) t.labels.push_back(l.get<std::string>());
    for (auto& d : j.at("degrees")) t.degrees.push_back(d.get<int>());
    t.truncation_approximate = j.value("truncationApproximate", true);
    if (j.contains("brackets"))
        for (auto& b : j["brackets"]) {
            int k = b.at("k").get<int>();
            std::vector<int> tuple;
            for (auto& i : b.at("inputs")) tuple.push_back(i.get<int>());
            std::vector<Rational> out(t.labels.size(), Rational(0));
            for (auto& o : b.at("output"))
                out[o.at("index").get<int>()] =
                    Rational::from_string(o.at("coeff").get<std::string>());
            t.constants[k][tuple] = out;
        }
    return t;
}

int cmd_ce(const Options& opt, const std::string& table_path, const std::string& twist_path,
           int ce_bound) {
    LinfTable table;
    std::string model_name;
    int n = opt.n;
    if (!table_path.empty()) {
        table = table_from_json(slurp(table_path));
        model_name = "table:" + table_path;
    } else {
        Ambient amb = make_ambient(opt);
        model_name = amb.model->name;
        ComplexWindow win = window_for(opt, amb);
        std::optional<GraphVector> m;
        if (!twist_path.empty()) {
            m = load_vector(twist_path, amb, CoefficientRing::rationals());
            if (!verify_mc(*m)) {
                std::cerr << "error: twist element is not Maurer-Cartan\n";
                return kExitMath;
            }
        }
        table = extract_linf(win, m, opt.k_max, effective_threads(opt));
    }
    CEResult res = ce_cohomology(table, {ce_bound});
    if (opt.format == "csv") {
        std::ostringstream os;
        os << "degree,rank,dim\n";
        for (auto& [d, r] : res.ranks) os << d << "," << r << "," << res.dims.at(d) << "\n";
        emit(opt, os.str());
    } else {
        emit(opt, ce_report(res, model_name, n));
    }
    return kExitOk;
}

void apply_config(Options& opt, CLI::App& app) {
    if (opt.config.empty()) return;
    json j = json::parse(slurp(opt.config));
    if (j.contains("algebra") && app.count("--algebra") == 0)
        opt.algebra = j["algebra"].get<std::string>();
    if (j.contains("n") && app.count("-n") == 0) opt.n = j["n"].get<int>();
    if (j.contains("deg") && app.count("--deg") == 0) opt.deg = j["deg"].get<std::string>();
    if (j.contains("kmax") && app.count("--kmax") == 0) opt.k_max = j["kmax"].get<int>();
    if (j.contains("threads") && app.count("--threads") == 0)
        opt.threads = j["threads"].get<int>();
    if (j.contains("format") && app.count("--format") == 0)
        opt.format = j["format"].get<std::string>();
    if (j.contains("maxEdges") && app.count("--max-edges") == 0)
        opt.max_edges = j["maxEdges"].get<int>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hgcalc: decorated hairy graph complexes, exact over Q"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--algebra", opt.algebra, "algebra source: builtin:<spec> or a JSON model file");
    app.add_option("-n,--ambient", opt.n, "ambient dimension n");
    app.add_option("--deg", opt.deg, "degree interval a:b (default -2:4)");
    app.add_option("--max-edges", opt.max_edges, "edge bound override");
    app.add_option("--kmax", opt.k_max, "largest ell_k expanded (default 4)");
    app.add_option("--format", opt.format, "text | json | csv (default json)");
    app.add_option("--threads", opt.threads, "worker count (env HGCALC_THREADS)");
    app.add_option("-o,--output", opt.output, "output file (default stdout)");
    app.add_option("--config", opt.config, "JSON config presetting flags");

    auto* algebra = app.add_subcommand("algebra", "algebra model utilities");
    std::string validate_source;
    auto* algebra_validate = algebra->add_subcommand("validate", "validate a model");
    algebra_validate->add_option("source", validate_source, "builtin:<spec> or JSON file")
        ->required();

    auto* basis_cmd = app.add_subcommand("basis", "enumerate a basis window");
    auto* homology_cmd = app.add_subcommand("homology", "exact homology on a window");
    std::string twist_path;
    homology_cmd->add_option("--twist", twist_path, "Maurer-Cartan element JSON");

    auto* mc = app.add_subcommand("mc", "Maurer-Cartan analysis");
    auto* mc_classify = mc->add_subcommand("classify", "obstruction system on the tree basis");
    auto* mc_verify = mc->add_subcommand("verify", "check an element");
    std::string element_path;
    mc_verify->add_option("--element", element_path, "GraphVector JSON")->required();
    auto* mc_gauge = mc->add_subcommand("gauge-check", "verify or search gauge paths");
    std::string gauge_path, gauge_from, gauge_to;
    mc_gauge->add_option("--path", gauge_path, "path over Q[t,dt] (JSON)");
    mc_gauge->add_option("--from", gauge_from, "MC element JSON");
    mc_gauge->add_option("--to", gauge_to, "MC element JSON");

    auto* utt = app.add_subcommand("utt", "unitrivalent tree quotient");
    auto* utt_h0_cmd = utt->add_subcommand("h0", "H_0 of the UTT complex");

    auto* ce_cmd = app.add_subcommand("ce", "Chevalley-Eilenberg model of a truncation");
    std::string ce_table, ce_twist;
    int ce_bound = 8;
    ce_cmd->add_option("--table", ce_table, "LinfTable JSON (skip window extraction)");
    ce_cmd->add_option("--twist", ce_twist, "Maurer-Cartan element JSON");
    ce_cmd->add_option("--ce-bound", ce_bound, "top cohomological degree (default 8)");

    // global flags may follow the subcommand
    for (auto* sub : {algebra, basis_cmd, homology_cmd, mc, utt, ce_cmd}) sub->fallthrough();
    for (auto* sub : {algebra_validate, mc_classify, mc_verify, mc_gauge, utt_h0_cmd})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config(opt, app);
        if (algebra_validate->parsed()) return cmd_algebra_validate(opt, validate_source);
        if (basis_cmd->parsed()) return cmd_basis(opt);
        if (homology_cmd->parsed()) return cmd_homology(opt, twist_path);
        if (mc->parsed()) {
            if (mc_classify->parsed()) return cmd_mc_classify(opt);
            if (mc_verify->parsed()) return cmd_mc_verify(opt, element_path);
            if (mc_gauge->parsed())
                return cmd_mc_gauge_check(opt, gauge_path, gauge_from, gauge_to);
            std::cerr << "error: mc needs a subcommand\n";
            return kExitInput;
        }
        if (utt->parsed()) {
            if (utt_h0_cmd->parsed()) return cmd_utt_h0(opt);
            std::cerr << "error: utt needs a subcommand\n";
            return kExitInput;
        }
        if (ce_cmd->parsed()) return cmd_ce(opt, ce_table, ce_twist, ce_bound);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMath;
    }
    std::cerr << "error: no command\n";
    return kExitInput;
}

#include "hgcalc/reports.hpp"

#include <nlohmann/json.hpp>

namespace hgcalc {

using nlohmann::json;

namespace {

json graph_json(const HairyGraph& g, const AlgebraModel& model) {
    json j;
    if (g.is_segment()) {
        j["segment"] = {model.basis[g.segment->first].id, model.basis[g.segment->second].id};
        return j;
    }
    j["vertices"] = g.vertices;
    j["edges"] = json::array();
    for (auto& [u, v] : g.edges) j["edges"].push_back({u, v});
    j["hairs"] = json::array();
    for (auto& [v, d] : g.hairs) j["hairs"].push_back({v, model.basis[d].id});
    return j;
}

json coeff_json(const RingElement& c) {
    // constants are emitted as "p/q" strings; general ring elements as a
    // list of {mono, c}
    bool constant = true;
    for (auto& [m, v] : c.terms())
        for (int e : m)
            if (e != 0) constant = false;
    if (constant) {
        Rational r(0);
        for (auto& [m, v] : c.terms()) r += v;
        return r.str();
    }
    json arr = json::array();
    for (auto& [m, v] : c.terms())
        arr.push_back({{"mono", c.ring()->monomial_str(m)}, {"c", v.str()}});
    return arr;
}

json vector_json(const GraphVector& v) {
    json arr = json::array();
    for (auto& [g, c] : v.terms())
        arr.push_back({{"graph", graph_text(g, *v.ambient().model)}, {"coeff", coeff_json(c)}});
    return arr;
}

}  // namespace

std::string poly_str(const RingElement& e) { return e.str(); }

std::string basis_report(const ComplexWindow& win, const std::string& model_name) {
    json j;
    j["model"] = model_name;
    j["n"] = win.amb.n;
    j["maxEdges"] = win.edge_cap;
    json degs = json::object();
    for (auto& [d, basis] : win.basis) {
        json jd;
        jd["dim"] = static_cast<int>(basis.size());
        jd["certified"] = win.certified.at(d);
        json graphs = json::array();
        for (auto& g : basis) graphs.push_back(graph_text(g, *win.amb.model));
        jd["graphs"] = graphs;
        degs[std::to_string(d)] = jd;
    }
    j["degrees"] = degs;
    return j.dump(2) + "\n";
}

std::string window_report(const ComplexWindow& win, const std::map<int, HomologyResult>& hom,
                          const std::string& model_name) {
    json j;
    j["model"] = model_name;
    j["n"] = win.amb.n;
    j["maxEdges"] = win.edge_cap;
    json degs = json::object();
    for (auto& [d, basis] : win.basis) {
        json jd;
        jd["dim"] = static_cast<int>(basis.size());
        jd["certified"] = win.certified.at(d);
        auto it = hom.find(d);
        if (it != hom.end()) {
            jd["homologyRank"] = it->second.rank;
            json reps = json::array();
            for (auto& r : it->second.representatives) reps.push_back(vector_json(r));
            jd["representatives"] = reps;
        }
        degs[std::to_string(d)] = jd;
    }
    j["degrees"] = degs;
    return j.dump(2) + "\n";
}

std::string mc_report(const Ambient& amb, const std::vector<HairyGraph>& basis,
                      const std::vector<Obstruction>& obstructions,
                      const std::optional<std::string>& solutions,
                      const std::vector<std::string>& gauge_checks) {
    json j;
    json b = json::array();
    for (auto& g : basis) b.push_back(graph_text(g, *amb.model));
    j["basis"] = b;
    json obs = json::array();
    for (auto& o : obstructions)
        obs.push_back({{"graph", graph_text(o.graph, *amb.model)}, {"poly", poly_str(o.poly)}});
    j["obstructions"] = obs;
    if (solutions) j["solutions"] = *solutions;
    json gc = json::array();
    for (auto& s : gauge_checks) gc.push_back(s);
    j["gaugeChecks"] = gc;
    return j.dump(2) + "\n";
}

std::string ce_report(const CEResult& ce, const std::string& model_name, int n) {
    json j;
    j["model"] = model_name;
    j["n"] = n;
    j["truncationApproximate"] = ce.truncation_approximate;
    j["dSquaredZero"] = ce.d_squared_zero;
    json ranks = json::object();
    for (auto& [d, r] : ce.ranks) ranks[std::to_string(d)] = r;
    j["ranks"] = ranks;
    json dims = json::object();
    for (auto& [d, r] : ce.dims) dims[std::to_string(d)] = r;
    j["dims"] = dims;
    return j.dump(2) + "\n";
}

std::string utt_report(const Ambient& amb, const UTTH0& h0, const std::string& model_name) {
    json j;
    j["model"] = model_name;
    j["n"] = amb.n;
    j["rank"] = h0.rank;
    json reps = json::array();
    for (auto& r : h0.basis) reps.push_back(vector_json(r));
    j["representatives"] = reps;
    return j.dump(2) + "\n";
}

std::string graphvector_to_json(const GraphVector& v) {
    json j;
    json arr = json::array();
    for (auto& [g, c] : v.terms())
        arr.push_back(
            {{"graph", json::parse(graph_to_json_text(g, *v.ambient().model))},
             {"coeff", coeff_json(c)}});
    j["terms"] = arr;
    return j.dump(2) + "\n";
}

GraphVector graphvector_from_json(const std::string& text, const Ambient& amb, RingPtr ring) {
    json j = json::parse(text);
    GraphVector v(amb, ring);
    for (auto& t : j.at("terms")) {
        HairyGraph g = graph_from_json_text(t.at("graph").dump(), *amb.model);
        RingElement c(ring);
        const json& coeff = t.at("coeff");
        if (coeff.is_string()) {
            c = RingElement::constant(ring, Rational::from_string(coeff.get<std::string>()));
        } else {
            for (auto& term : coeff) {
                // parse "t^2*dt" style monomials over the ring's generators
                std::string ms = term.at("mono").get<std::string>();
                Monomial mono(ring->size(), 0);
                if (ms != "1") {
                    std::size_t pos = 0;
                    while (pos < ms.size()) {
                        std::size_t star = ms.find('*', pos);
                        std::string factor =
                            ms.substr(pos, star == std::string::npos ? std::string::npos
                                                                     : star - pos);
                        int exp = 1;
                        std::size_t caret = factor.find('^');
                        std::string name = factor;
                        if (caret != std::string::npos) {
                            name = factor.substr(0, caret);
                            exp = std::stoi(factor.substr(caret + 1));
                        }
                        mono[ring->index_of(name)] += exp;
                        if (star == std::string::npos) break;
                        pos = star + 1;
                    }
                }
                c.add_term(mono, Rational::from_string(term.at("c").get<std::string>()));
            }
        }
        v.add_presentation(g, c);
    }
    return v;
}

}  // namespace hgcalc

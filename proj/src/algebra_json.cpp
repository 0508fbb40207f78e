#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hgcalc/algebra.hpp"

namespace hgcalc {

using nlohmann::json;

namespace {

AlgElement parse_elem(const AlgebraModel& m, const json& arr) {
    AlgElement out;
    for (auto& t : arr) {
        int idx = m.index_of(t.at("basis").get<std::string>());
        Rational c = Rational::from_string(t.at("coeff").get<std::string>());
        if (c.is_zero()) continue;
        out[idx] += c;
        if (out[idx].is_zero()) out.erase(idx);
    }
    return out;
}

json elem_json(const AlgebraModel& m, const AlgElement& e) {
    json arr = json::array();
    for (auto& [i, c] : e) arr.push_back({{"basis", m.basis[i].id}, {"coeff", c.str()}});
    return arr;
}

}  // namespace

ModelPtr parse_model_json(const std::string& text) {
    json j = json::parse(text);
    AlgebraModel m;
    m.name = j.value("name", "model");
    for (auto& b : j.at("basis"))
        m.basis.push_back({b.at("id").get<std::string>(), b.at("degree").get<int>()});

    if (j.contains("products"))
        for (auto& p : j["products"]) {
            int l = m.index_of(p.at("left").get<std::string>());
            int r = m.index_of(p.at("right").get<std::string>());
            AlgElement e = parse_elem(m, p.at("result"));
            if (!e.empty()) m.product[{l, r}] = std::move(e);
        }
    // fill omitted commutativity partners by the Koszul rule
    {
        auto given = m.product;
        for (auto& [lr, e] : given) {
            auto rev = std::make_pair(lr.second, lr.first);
            if (m.product.count(rev)) continue;
            int s = (m.basis[lr.first].degree * m.basis[lr.second].degree) % 2 ? -1 : 1;
            AlgElement mirrored = e;
            if (s < 0)
                for (auto& [k, c] : mirrored) c = -c;
            if (!mirrored.empty()) m.product[rev] = std::move(mirrored);
        }
    }

    if (j.contains("differential"))
        for (auto& d : j["differential"]) {
            int i = m.index_of(d.at("on").get<std::string>());
            AlgElement e = parse_elem(m, d.at("result"));
            if (!e.empty()) m.differential[i] = std::move(e);
        }

    if (j.contains("homotopy"))
        for (auto& h : j["homotopy"]) {
            RootedTree t = RootedTree::parse(h.at("tree").get<std::string>());
            ShapeForm sf = shape_canonical(t);
            std::vector<int> inputs;
            for (auto& id : h.at("inputs")) inputs.push_back(m.index_of(id.get<std::string>()));
            if (static_cast<int>(inputs.size()) != t.leaf_count())
                throw std::invalid_argument("homotopy entry: arity mismatch");
            // store against the shape-canonical labeling; inputs are listed
            // in the original tree's leaf order 1..r
            std::vector<int> ordered(inputs.size());
            int sign_count = 0;
            for (std::size_t k = 0; k < inputs.size(); ++k)
                ordered[k] = inputs[sf.leaf_sources[k] - 1];
            // Koszul sign of the reordering on odd arguments
            for (std::size_t a = 0; a < ordered.size(); ++a)
                for (std::size_t b = a + 1; b < ordered.size(); ++b)
                    if (sf.leaf_sources[a] > sf.leaf_sources[b] &&
                        m.degree_of(ordered[a]) % 2 != 0 && m.degree_of(ordered[b]) % 2 != 0)
                        ++sign_count;
            AlgElement e = parse_elem(m, h.at("result"));
            if (sign_count & 1)
                for (auto& [k, c] : e) c = -c;
            if (!e.empty()) m.homotopy[sf.tree.key()][ordered] = std::move(e);
        }

    return std::make_shared<AlgebraModel>(std::move(m));
}

ModelPtr load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str());
}

std::string model_to_json(const AlgebraModel& m) {
    json j;
    j["name"] = m.name;
    j["basis"] = json::array();
    for (auto& b : m.basis) j["basis"].push_back({{"id", b.id}, {"degree", b.degree}});
    j["products"] = json::array();
    for (auto& [lr, e] : m.product)
        j["products"].push_back({{"left", m.basis[lr.first].id},
                                 {"right", m.basis[lr.second].id},
                                 {"result", elem_json(m, e)}});
    j["differential"] = json::array();
    for (auto& [i, e] : m.differential)
        j["differential"].push_back({{"on", m.basis[i].id}, {"result", elem_json(m, e)}});
    if (m.has_homotopy()) {
        j["homotopy"] = json::array();
        for (auto& [key, table] : m.homotopy)
            for (auto& [args, e] : table) {
                json inputs = json::array();
                for (int a : args) inputs.push_back(m.basis[a].id);
                j["homotopy"].push_back(
                    {{"tree", key}, {"inputs", inputs}, {"result", elem_json(m, e)}});
            }
    }
    return j.dump(2);
}

}  // namespace hgcalc

#include "hgcalc/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace hgcalc {

int HairyGraph::edge_count() const {
    if (is_segment()) return 1;
    return static_cast<int>(edges.size() + hairs.size());
}

int HairyGraph::genus() const {
    if (is_segment()) return 0;
    return static_cast<int>(edges.size()) - vertices + 1;
}

Validity is_valid(const HairyGraph& g, const AlgebraModel& model) {
    auto bad = [](const std::string& r) { return Validity{false, r}; };
    int nb = static_cast<int>(model.size());
    if (g.is_segment()) {
        if (g.vertices != 0 || !g.edges.empty() || !g.hairs.empty())
            return bad("segment flag combined with vertex data");
        auto [a, b] = *g.segment;
        if (a < 0 || a >= nb || b < 0 || b >= nb) return bad("segment: unknown decoration");
        return {};
    }
    if (g.vertices == 0) return bad("the segment is the only graph without internal vertices");
    std::vector<int> valence(g.vertices, 0);
    for (auto& [u, v] : g.edges) {
        if (u < 0 || u >= g.vertices || v < 0 || v >= g.vertices)
            return bad("edge endpoint out of range");
        valence[u] += 1;
        valence[v] += 1;
    }
    for (auto& [v, d] : g.hairs) {
        if (v < 0 || v >= g.vertices) return bad("hair attachment out of range");
        if (d < 0 || d >= nb) return bad("unknown decoration");
        valence[v] += 1;
    }
    if (g.hairs.empty()) return bad("graph must carry at least one hair");
    for (int v = 0; v < g.vertices; ++v)
        if (valence[v] < 3)
            return bad("internal vertex " + std::to_string(v) + " has valence " +
                       std::to_string(valence[v]));
    // connectivity through internal edges
    std::vector<int> par(g.vertices);
    std::iota(par.begin(), par.end(), 0);
    std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
    for (auto& [u, v] : g.edges) par[find(u)] = find(v);
    for (int v = 1; v < g.vertices; ++v)
        if (find(v) != find(0)) return bad("graph is not connected");
    return {};
}

int degree(const HairyGraph& g, const Ambient& amb) {
    const AlgebraModel& m = *amb.model;
    int sum = 0;
    if (g.is_segment()) {
        sum = m.degree_of(g.segment->first) + m.degree_of(g.segment->second);
    } else {
        for (auto& [v, d] : g.hairs) sum += m.degree_of(d);
    }
    return (amb.n - 1) * g.edge_count() - amb.n * g.vertices - sum;
}

namespace {

int hair_parity(int n, int deg) { return (n - 1 + deg) & 1; }

// parity of inversions among odd-parity slots of a slot permutation
int odd_inversions_sign(const std::vector<int>& target_slot, const std::vector<bool>& odd) {
    int s = 0;
    for (std::size_t i = 0; i < target_slot.size(); ++i) {
        if (!odd[i]) continue;
        for (std::size_t j = i + 1; j < target_slot.size(); ++j)
            if (odd[j] && target_slot[i] > target_slot[j]) ++s;
    }
    return (s & 1) ? -1 : 1;
}

struct Code {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, int>> hairs;
    auto operator<=>(const Code&) const = default;
};

Code code_under(const HairyGraph& g, const std::vector<int>& lab) {
    Code c;
    c.edges.reserve(g.edges.size());
    for (auto& [u, v] : g.edges) {
        int a = lab[u], b = lab[v];
        c.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(c.edges.begin(), c.edges.end());
    c.hairs.reserve(g.hairs.size());
    for (auto& [v, d] : g.hairs) c.hairs.push_back({lab[v], d});
    std::sort(c.hairs.begin(), c.hairs.end());
    return c;
}

// orientation-comparison sign of the relabeling lab: input presentation ->
// canonical presentation given by the sorted code
int labeling_sign(const HairyGraph& g, const std::vector<int>& lab, const Code& code,
                  const Ambient& amb) {
    int n = amb.n;
    int sign = 1;

    // vertex cells (parity n): inversions of the label sequence
    if (n & 1) {
        int inv = 0;
        for (int i = 0; i < g.vertices; ++i)
            for (int j = i + 1; j < g.vertices; ++j)
                if (lab[i] > lab[j]) ++inv;
        if (inv & 1) sign = -sign;
    }

    // edge cells (parity n-1) and directions (n odd)
    {
        std::map<std::pair<int, int>, std::vector<int>> slot_groups;
        for (std::size_t s = 0; s < code.edges.size(); ++s)
            slot_groups[code.edges[s]].push_back(static_cast<int>(s));
        std::map<std::pair<int, int>, std::size_t> used;
        std::vector<int> target(g.edges.size());
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            auto [u, v] = g.edges[i];
            int a = lab[u], b = lab[v];
            if ((n & 1) && a > b) sign = -sign;  // direction flip
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            target[i] = slot_groups[key][used[key]++];
        }
        if ((n & 1) == 0) {
            std::vector<bool> odd(g.edges.size(), true);
            sign *= odd_inversions_sign(target, odd);
        }
    }

    // hair cells (parity n-1+|a|)
    {
        std::map<std::pair<int, int>, std::vector<int>> slot_groups;
        for (std::size_t s = 0; s < code.hairs.size(); ++s)
            slot_groups[code.hairs[s]].push_back(static_cast<int>(s));
        std::map<std::pair<int, int>, std::size_t> used;
        std::vector<int> target(g.hairs.size());
        std::vector<bool> odd(g.hairs.size());
        for (std::size_t i = 0; i < g.hairs.size(); ++i) {
            auto [v, d] = g.hairs[i];
            auto key = std::make_pair(lab[v], d);
            target[i] = slot_groups[key][used[key]++];
            odd[i] = hair_parity(n, amb.model->degree_of(d)) != 0;
        }
        sign *= odd_inversions_sign(target, odd);
    }

    return sign;
}

}  // namespace

namespace {

// color refinement; returns per-vertex color ranks
std::vector<int> refine_colors(const HairyGraph& g) {
    int V = g.vertices;
    std::vector<std::vector<int>> hairdecs(V);
    std::vector<int> valence(V, 0), tadpoles(V, 0);
    for (auto& [u, v] : g.edges) {
        valence[u] += 1;
        valence[v] += 1;
        if (u == v) tadpoles[u] += 1;
    }
    for (auto& [v, d] : g.hairs) {
        valence[v] += 1;
        hairdecs[v].push_back(d);
    }
    for (auto& h : hairdecs) std::sort(h.begin(), h.end());

    std::vector<int> color(V);
    {
        std::vector<std::tuple<int, int, std::vector<int>>> init(V);
        for (int v = 0; v < V; ++v) init[v] = {valence[v], tadpoles[v], hairdecs[v]};
        auto sorted = init;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < V; ++v)
            color[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), init[v]) - sorted.begin());
    }
    while (true) {
        std::vector<std::pair<int, std::vector<int>>> sig(V);
        for (int v = 0; v < V; ++v) sig[v].first = color[v];
        for (auto& [u, v] : g.edges) {
            sig[u].second.push_back(color[v]);
            sig[v].second.push_back(color[u]);
        }
        for (int v = 0; v < V; ++v) std::sort(sig[v].second.begin(), sig[v].second.end());
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(V);
        for (int v = 0; v < V; ++v)
            next[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        if (next == color) break;
        color = next;
    }
    return color;
}

struct CanonResult {
    HairyGraph graph;
    int sign;  // 0 when an automorphism reverses orientation
};

CanonResult canonical_search(const HairyGraph& g, const Ambient& amb) {
    int V = g.vertices;
    std::vector<int> color = refine_colors(g);

    // classes ordered by color; candidate labelings permute within classes
    std::vector<std::vector<int>> classes;
    {
        int nc = *std::max_element(color.begin(), color.end()) + 1;
        classes.resize(nc);
        for (int v = 0; v < V; ++v) classes[color[v]].push_back(v);
    }
    std::vector<int> offset(classes.size());
    {
        int at = 0;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            offset[c] = at;
            at += static_cast<int>(classes[c].size());
        }
    }

    std::optional<Code> best;
    std::vector<std::vector<int>> best_labs;
    std::vector<int> lab(V);
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == classes.size()) {
            Code code = code_under(g, lab);
            if (!best || code < *best) {
                best = code;
                best_labs.clear();
            }
            if (code == *best) best_labs.push_back(lab);
            return;
        }
        std::vector<int> perm = classes[c];
        std::sort(perm.begin(), perm.end());
        do {
            for (std::size_t i = 0; i < perm.size(); ++i)
                lab[perm[i]] = offset[c] + static_cast<int>(i);
            rec(c + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(0);

    HairyGraph canon;
    canon.vertices = V;
    canon.edges = best->edges;
    canon.hairs = best->hairs;

    int sign = labeling_sign(g, best_labs[0], *best, amb);
    for (std::size_t i = 1; i < best_labs.size(); ++i) {
        if (labeling_sign(g, best_labs[i], *best, amb) != sign) {
            sign = 0;
            break;
        }
    }
    return {std::move(canon), sign};
}

}  // namespace

std::pair<CanonicalGraph, int> canonicalize(const HairyGraph& g, const Ambient& amb) {
    Validity val = is_valid(g, *amb.model);
    if (!val.ok) throw std::invalid_argument("canonicalize: invalid graph: " + val.reason);
    const AlgebraModel& model = *amb.model;
    int n = amb.n;

    if (g.is_segment()) {
        auto [a, b] = *g.segment;
        int swap_sign = ((n & 1) ? -1 : 1) *
                        ((model.degree_of(a) % 2 != 0 && model.degree_of(b) % 2 != 0) ? -1 : 1);
        CanonicalGraph cg{HairyGraph::make_segment(std::min(a, b), std::max(a, b))};
        if (a == b && swap_sign < 0) return {cg, 0};
        return {cg, a <= b ? 1 : swap_sign};
    }

    // vanishing by an orientation-reversing automorphism that fixes vertices:
    // tadpole direction flips (n odd), parallel-edge swaps (n even), and
    // swaps of equal hairs of odd cell parity
    bool dead = false;
    {
        std::map<std::pair<int, int>, int> mult;
        for (auto& [u, v] : g.edges) {
            if (u == v && (n & 1)) dead = true;
            ++mult[{std::min(u, v), std::max(u, v)}];
        }
        if ((n & 1) == 0)
            for (auto& [e, k] : mult)
                if (k >= 2) dead = true;
        std::map<std::pair<int, int>, int> hmult;
        for (auto& [v, d] : g.hairs)
            if (++hmult[{v, d}] >= 2 && hair_parity(n, model.degree_of(d)) != 0) dead = true;
    }

    CanonResult res = canonical_search(g, amb);
    return {CanonicalGraph{std::move(res.graph)}, dead ? 0 : res.sign};
}

std::string graph_text(const HairyGraph& g, const AlgebraModel& model) {
    std::ostringstream os;
    if (g.is_segment()) {
        os << "seg(" << model.basis[g.segment->first].id << ","
           << model.basis[g.segment->second].id << ")";
        return os.str();
    }
    os << "v" << g.vertices << ";e";
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        os << (i ? "," : "") << g.edges[i].first << "-" << g.edges[i].second;
    os << ";h";
    for (std::size_t i = 0; i < g.hairs.size(); ++i)
        os << (i ? "," : "") << g.hairs[i].first << "." << model.basis[g.hairs[i].second].id;
    return os.str();
}

HairyGraph graph_from_json_text(const std::string& text, const AlgebraModel& model) {
    nlohmann::json j = nlohmann::json::parse(text);
    HairyGraph g;
    if (j.contains("segment")) {
        auto arr = j["segment"];
        return HairyGraph::make_segment(model.index_of(arr.at(0).get<std::string>()),
                                        model.index_of(arr.at(1).get<std::string>()));
    }
    g.vertices = j.at("vertices").get<int>();
    if (j.contains("edges"))
        for (auto& e : j["edges"]) g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    if (j.contains("hairs"))
        for (auto& h : j["hairs"])
            g.hairs.push_back({h.at(0).get<int>(), model.index_of(h.at(1).get<std::string>())});
    return g;
}

std::string graph_to_json_text(const HairyGraph& g, const AlgebraModel& model) {
    nlohmann::json j;
    if (g.is_segment()) {
        j["segment"] = {model.basis[g.segment->first].id, model.basis[g.segment->second].id};
        return j.dump();
    }
    j["vertices"] = g.vertices;
    j["edges"] = nlohmann::json::array();
    for (auto& [u, v] : g.edges) j["edges"].push_back({u, v});
    j["hairs"] = nlohmann::json::array();
    for (auto& [v, d] : g.hairs) j["hairs"].push_back({v, model.basis[d].id});
    return j.dump();
}

}  // namespace hgcalc

#include "hgcalc/graphvec.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "hgcalc/detail/cells.hpp"

namespace hgcalc {

void GraphVector::add_canonical(const HairyGraph& g, const RingElement& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
        terms_.emplace(g, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void GraphVector::add_presentation(const HairyGraph& g, const RingElement& c) {
    if (c.is_zero()) return;
    auto [cg, sign] = canonicalize(g, amb_);
    if (sign == 0) return;
    RingElement cc = c;
    if (sign < 0) cc = -cc;
    add_canonical(cg.graph, cc);
}

void GraphVector::add_presentation(const HairyGraph& g, const Rational& c) {
    add_presentation(g, RingElement::constant(ring_, c));
}

GraphVector& GraphVector::operator+=(const GraphVector& o) {
    for (auto& [g, c] : o.terms_) add_canonical(g, c);
    return *this;
}

GraphVector& GraphVector::operator-=(const GraphVector& o) {
    for (auto& [g, c] : o.terms_) add_canonical(g, -c);
    return *this;
}

GraphVector GraphVector::operator*(const Rational& c) const {
    GraphVector out(amb_, ring_);
    if (c.is_zero()) return out;
    for (auto& [g, v] : terms_) {
        RingElement vv = v;
        vv *= c;
        out.add_canonical(g, vv);
    }
    return out;
}

bool GraphVector::is_homogeneous_of_degree(int d) const {
    for (auto& [g, c] : terms_) {
        int gd = degree(g, amb_);
        for (auto& [m, coef] : c.terms())
            if (gd + ring_->monomial_degree(m) != d) return false;
    }
    return true;
}

int GraphVector::max_edges() const {
    int e = 0;
    for (auto& [g, c] : terms_) e = std::max(e, g.edge_count());
    return e;
}

std::string GraphVector::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [g, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")*" << graph_text(g, *amb_.model);
    }
    return os.str();
}

GraphVector lift_vector(const GraphVector& v, const RingPtr& bigger) {
    GraphVector out(v.ambient(), bigger);
    for (auto& [g, c] : v.terms()) out.add_canonical(g, lift_to(c, bigger));
    return out;
}

namespace {

RingElement project_coeff(const RingElement& c, const RingPtr& base) {
    RingElement out(base);
    for (auto& [m, coef] : c.terms()) {
        for (std::size_t i = base->size(); i < m.size(); ++i)
            if (m[i] != 0) throw std::logic_error("project: residual extension generator");
        Monomial mm(m.begin(), m.begin() + static_cast<long>(base->size()));
        out.add_term(mm, coef);
    }
    return out;
}

}  // namespace

GraphVector project_vector(const GraphVector& v, const RingPtr& base) {
    GraphVector out(v.ambient(), base);
    for (auto& [g, c] : v.terms()) out.add_canonical(g, project_coeff(c, base));
    return out;
}

// ---------------------------------------------------------------------------
// the orientation-word sign engine lives in detail/cells.hpp

namespace {

using detail::CellWord;
using detail::TreeLayout;
using detail::build_word;
using detail::extraction_sign;
using detail::odd_inv_sign;
using detail::realize_tree;
using detail::subsets_of_size_at_least;

// One joined output term.  `chosen` lists, per input graph, the subset of its
// hair slots (normal: hair indices; segment: 0 = first end, 1 = second).
struct JoinResult {
    HairyGraph graph;       // raw presentation
    int sign = 1;
    std::vector<int> decorations;  // consumption-ordered decoration indices
    int root_vertex = 0;           // raw index carrying the new hair
};

// Geometry + sign of the join of the given graphs along `chosen`, realizing
// the tree t.  The new root hair is left undecorated (slot filled by caller
// per rho term).
//
// Signs follow the two-factor model Hom(graphs, (x)A): the orientation word
// splits as [graph cells][decoration cells], graph cells carrying parity n
// (vertices) or n-1 (all edge cells, hair edges included), decorations their
// algebra degree.  The join acts as f (x) mu with f creating the realized
// tree and mu multiplying the chosen decorations; the Koszul crossing sign
// (-1)^{|mu| |G|} and the explicit conversions between this word and the raw
// presentation make delta^2 = 0 hold against d_A and the splits.
JoinResult join_geometry(const std::vector<const HairyGraph*>& gs,
                         const std::vector<std::vector<int>>& chosen, const RootedTree& t,
                         const Ambient& amb) {
    const AlgebraModel& model = *amb.model;
    const int n = amb.n;
    const int pv = n & 1;        // vertex cell parity
    const int pe = (n - 1) & 1;  // edge / hair-edge cell parity
    TreeLayout lay = realize_tree(t);
    const int p = lay.vertex_count;

    int sign_exp = 0;  // exponent of (-1)

    // per-input decoration lists (hair order; segments list (a, b))
    auto decs_of = [&](const HairyGraph& g) {
        std::vector<int> d;
        if (g.is_segment()) {
            d = {g.segment->first, g.segment->second};
        } else {
            for (auto& [v, dd] : g.hairs) d.push_back(dd);
        }
        return d;
    };
    auto dec_odd = [&](int dec) { return model.degree_of(dec) & 1; };

    // input -> two-block conversions: each decoration crosses the hair-edge
    // cells of the later hairs of its own graph
    if (pe) {
        for (auto* g : gs) {
            if (g->is_segment()) continue;  // single shared edge cell, already trailing
            int q = static_cast<int>(g->hairs.size());
            for (int j = 0; j < q; ++j)
                if (dec_odd(g->hairs[j].second)) sign_exp += q - 1 - j;
        }
    }

    // concatenation [G1 D1 G2 D2 ...] -> [G1 G2 ...][D1 D2 ...]
    std::vector<int> gamma(gs.size()), dpar(gs.size());
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const HairyGraph& g = *gs[i];
        if (g.is_segment()) {
            gamma[i] = pe;
        } else {
            gamma[i] =
                (g.vertices * pv + static_cast<int>(g.edges.size() + g.hairs.size()) * pe) & 1;
        }
        int dp = 0;
        for (int d : decs_of(g)) dp += dec_odd(d);
        dpar[i] = dp & 1;
    }
    for (std::size_t i = 0; i < gs.size(); ++i)
        for (std::size_t j = i + 1; j < gs.size(); ++j) sign_exp += dpar[i] * gamma[j];

    // operator crossing: |mu| = 1 - p over the concatenated G block
    {
        int gtot = 0;
        for (int gpar : gamma) gtot += gpar;
        sign_exp += ((1 + p) & 1) * (gtot & 1);
    }

    // collect consumption data (graph order, slot order)
    struct ChosenRef {
        std::size_t graph;
        int slot;
        int leaf;  // 1-based
    };
    std::vector<ChosenRef> refs;
    std::vector<int> decorations;
    for (std::size_t i = 0; i < gs.size(); ++i)
        for (int slot : chosen[i]) {
            refs.push_back({i, slot, static_cast<int>(refs.size()) + 1});
            decorations.push_back(gs[i]->is_segment()
                                      ? (slot == 0 ? gs[i]->segment->first : gs[i]->segment->second)
                                      : gs[i]->hairs[slot].second);
        }

    // mu: extract the chosen decorations to the front of the D word
    {
        // D word: per input, decorations in hair order; mark chosen
        std::vector<std::pair<int, bool>> dword;  // (parity, chosen)
        std::vector<std::size_t> chosen_pos;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            std::vector<int> d = decs_of(*gs[i]);
            std::vector<bool> pick(d.size(), false);
            for (int slot : chosen[i]) pick[slot] = true;
            for (std::size_t j = 0; j < d.size(); ++j) {
                if (pick[j]) chosen_pos.push_back(dword.size());
                dword.push_back({dec_odd(d[j]), pick[j]});
            }
        }
        for (std::size_t cp : chosen_pos) {
            if (!dword[cp].first) continue;
            for (std::size_t b = 0; b < cp; ++b)
                if (!dword[b].second && dword[b].first) sign_exp += 1;
        }
    }

    // vertex offsets and target vertices
    std::vector<int> voff(gs.size());
    int vtotal = 0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        voff[i] = vtotal;
        vtotal += gs[i]->is_segment() ? 0 : gs[i]->vertices;
    }
    int tree_off = vtotal;
    auto leaf_target = [&](int leaf) { return tree_off + lay.leaf_parent[leaf - 1]; };

    // merged hairs from one-end segments
    struct Merged {
        std::size_t graph;
        int surviving_dec;
        int target_vertex;
    };
    std::vector<Merged> merged;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!gs[i]->is_segment() || chosen[i].size() != 1) continue;
        int surv = 1 - chosen[i][0];
        int leaf = 0;
        for (auto& r : refs)
            if (r.graph == i) leaf = r.leaf;
        merged.push_back({i, surv == 0 ? gs[i]->segment->first : gs[i]->segment->second,
                          leaf_target(leaf)});
    }

    // rho output degree (tables are homogeneous)
    int rho_deg = 1 - p;
    for (int d : decorations) rho_deg += model.degree_of(d);
    int rho_odd = rho_deg & 1;

    // D reorder: [rho | non-chosen decorations in concat order] to the output
    // hair order [normal survivors (graph, slot order) | merged survivors
    // (graph order) | rho]
    {
        // build source list of non-chosen decorations with a tag whether the
        // owner is a one-end segment (those move behind the normal survivors)
        struct Dcell {
            int parity;
            bool merged_seg;
        };
        std::vector<Dcell> src;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            std::vector<int> d = decs_of(*gs[i]);
            std::vector<bool> pick(d.size(), false);
            for (int slot : chosen[i]) pick[slot] = true;
            bool oneend = gs[i]->is_segment() && chosen[i].size() == 1;
            for (std::size_t j = 0; j < d.size(); ++j)
                if (!pick[j]) src.push_back({dec_odd(d[j]), oneend});
        }
        // rho moves from the front to the very end: crosses every survivor
        if (rho_odd)
            for (auto& c : src) sign_exp += c.parity;
        // merged-segment decorations move behind the normal ones: count odd
        // inversions of the stable partition
        for (std::size_t a = 0; a < src.size(); ++a)
            if (src[a].merged_seg && src[a].parity)
                for (std::size_t b = a + 1; b < src.size(); ++b)
                    if (!src[b].merged_seg && src[b].parity) sign_exp += 1;
    }

    // ------------------------------------------------------------------
    // G block: creation and reorder to the raw presentation
    // source order: per input graph [vertices][internal edges][hair edges]
    // (segments contribute their single edge cell), then the created cells
    // [tree vertices][tree edges][new hair edge].
    // raw order: [vertices: inputs then tree][edges: per input internal +
    // repurposed segment edges, tree edges, leaf edges][hair edges:
    // survivors per input, merged segment edges, new hair edge].
    HairyGraph out;
    out.vertices = vtotal + p;

    struct GCell {
        int raw_pos;
        bool odd;
    };
    std::vector<GCell> gcells;  // in source order

    // raw position layout
    int raw_edge_base = 0;  // counted separately per region; compute below
    int n_internal = 0;
    for (std::size_t i = 0; i < gs.size(); ++i)
        n_internal += gs[i]->is_segment() ? (chosen[i].size() == 2 ? 1 : 0)
                                          : static_cast<int>(gs[i]->edges.size());
    int n_leaf = 0;
    for (auto& r : refs)
        if (!gs[r.graph]->is_segment()) ++n_leaf;
    int n_tree_edges = static_cast<int>(lay.edges.size());
    raw_edge_base = out.vertices;
    int raw_tree_edge_base = raw_edge_base + n_internal;
    int raw_leaf_base = raw_tree_edge_base + n_tree_edges;
    int raw_hairedge_base = raw_leaf_base + n_leaf;

    // raw slots for per-input cells
    {
        int internal_at = raw_edge_base;
        int leaf_at = raw_leaf_base;
        int hair_at = raw_hairedge_base;
        // survivors first (per input, slot order)
        std::vector<int> survivor_slot;  // filled on the fly
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const HairyGraph& g = *gs[i];
            if (g.is_segment()) continue;
            for (int v = 0; v < g.vertices; ++v) (void)v;
        }
        // march through inputs in source order, assigning raw positions
        int merged_hair_at = 0;  // assigned after survivors; precompute count
        int survivors = 0;
        for (std::size_t i = 0; i < gs.size(); ++i)
            if (!gs[i]->is_segment())
                survivors += static_cast<int>(gs[i]->hairs.size() - chosen[i].size());
        merged_hair_at = raw_hairedge_base + survivors;

        for (std::size_t i = 0; i < gs.size(); ++i) {
            const HairyGraph& g = *gs[i];
            if (g.is_segment()) {
                if (chosen[i].size() == 2) {
                    gcells.push_back({internal_at++, pe != 0});
                } else {
                    // one-end segment: its edge becomes the merged hair edge
                    gcells.push_back({merged_hair_at++, pe != 0});
                }
            } else {
                for (int v = 0; v < g.vertices; ++v) gcells.push_back({voff[i] + v, pv != 0});
                for (std::size_t e = 0; e < g.edges.size(); ++e)
                    gcells.push_back({internal_at++, pe != 0});
                std::vector<bool> pick(g.hairs.size(), false);
                for (int slot : chosen[i]) pick[slot] = true;
                // consumed hair edges become leaf edges in consumption order;
                // consumption order within the graph is slot order, matching
                // the source order, so a running counter per graph works
                int my_leaf_at = leaf_at;
                for (std::size_t h = 0; h < g.hairs.size(); ++h) {
                    if (pick[h]) {
                        gcells.push_back({my_leaf_at++, pe != 0});
                    } else {
                        gcells.push_back({hair_at++, pe != 0});
                    }
                }
                leaf_at = my_leaf_at;
            }
        }
        // created cells: tree vertices, tree edges, new hair edge
        for (int v = 0; v < p; ++v) gcells.push_back({tree_off + v, pv != 0});
        for (int e = 0; e < n_tree_edges; ++e) gcells.push_back({raw_tree_edge_base + e, pe != 0});
        gcells.push_back({merged_hair_at + static_cast<int>(merged.size()), pe != 0});
    }
    {
        std::vector<std::pair<int, bool>> items;
        items.reserve(gcells.size());
        for (auto& c : gcells) items.push_back({c.raw_pos, c.odd});
        if (odd_inv_sign(items) < 0) sign_exp += 1;
    }

    // output -> two-block conversion (inverse direction, same parity count):
    // output decorations cross the hair-edge cells of later output hairs
    int out_hairs_total = 0;
    {
        std::vector<int> out_dec_parities;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const HairyGraph& g = *gs[i];
            if (g.is_segment()) continue;
            std::vector<bool> pick(g.hairs.size(), false);
            for (int slot : chosen[i]) pick[slot] = true;
            for (std::size_t h = 0; h < g.hairs.size(); ++h)
                if (!pick[h]) out_dec_parities.push_back(dec_odd(g.hairs[h].second));
        }
        for (auto& m : merged) out_dec_parities.push_back(dec_odd(m.surviving_dec));
        out_dec_parities.push_back(rho_odd);
        out_hairs_total = static_cast<int>(out_dec_parities.size());
        if (pe) {
            for (int j = 0; j < out_hairs_total; ++j)
                if (out_dec_parities[j]) sign_exp += out_hairs_total - 1 - j;
        }
    }

    // ------------------------------------------------------------------
    // build the actual graph data (raw presentation)
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i]->is_segment()) {
            if (chosen[i].size() == 2) {
                int leaf_a = 0, leaf_b = 0;
                for (auto& r : refs)
                    if (r.graph == i) (r.slot == 0 ? leaf_a : leaf_b) = r.leaf;
                out.edges.push_back({leaf_target(leaf_a), leaf_target(leaf_b)});
            }
        } else {
            for (auto& [u, v] : gs[i]->edges) out.edges.push_back({voff[i] + u, voff[i] + v});
        }
    }
    for (auto& [pp, cc] : lay.edges) out.edges.push_back({tree_off + pp, tree_off + cc});
    for (auto& r : refs) {
        if (gs[r.graph]->is_segment()) continue;
        int u = gs[r.graph]->hairs[r.slot].first;
        out.edges.push_back({voff[r.graph] + u, leaf_target(r.leaf)});
    }
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i]->is_segment()) continue;
        std::vector<bool> pick(gs[i]->hairs.size(), false);
        for (int slot : chosen[i]) pick[slot] = true;
        for (std::size_t h = 0; h < gs[i]->hairs.size(); ++h)
            if (!pick[h])
                out.hairs.push_back({voff[i] + gs[i]->hairs[h].first, gs[i]->hairs[h].second});
    }
    for (auto& m : merged) out.hairs.push_back({m.target_vertex, m.surviving_dec});
    // the root hair itself is appended by the caller per rho term

    JoinResult res;
    res.graph = std::move(out);
    res.sign = (sign_exp & 1) ? -1 : 1;
    res.decorations = std::move(decorations);
    res.root_vertex = tree_off + lay.root;
    return res;
}

int slot_count(const HairyGraph& g) {
    return g.is_segment() ? 2 : static_cast<int>(g.hairs.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// differential pieces

namespace {

// d_A: apply the model differential to one decoration at a time.  In the
// two-factor word the operator is 1 (x) d, so it crosses the whole graph
// block (sign (-1)^{|G|}), then the decorations before the target; for
// ordinary graphs the conversion between the raw presentation and the
// two-block word adds the hair-edge cells after the target.
void apply_dA(const HairyGraph& g, const Ambient& amb, const RingElement& coeff,
              GraphVector& out) {
    const AlgebraModel& model = *amb.model;
    const int n = amb.n;
    const int pv = n & 1, pe = (n - 1) & 1;

    int gamma;
    std::vector<int> decs;
    if (g.is_segment()) {
        gamma = pe;
        decs = {g.segment->first, g.segment->second};
    } else {
        gamma = (g.vertices * pv + static_cast<int>(g.edges.size() + g.hairs.size()) * pe) & 1;
        for (auto& [v, d] : g.hairs) decs.push_back(d);
    }

    int q = static_cast<int>(decs.size());
    for (int i = 0; i < q; ++i) {
        AlgElement de = model.differential_of(decs[i]);
        if (de.empty()) continue;
        int exp = gamma;
        for (int j = 0; j < i; ++j) exp += model.degree_of(decs[j]) & 1;
        if (!g.is_segment()) exp += (q - 1 - i) * pe;  // conversion flip
        int sign = (exp & 1) ? -1 : 1;
        for (auto& [b, c] : de) {
            HairyGraph gg = g;
            if (g.is_segment()) {
                (i == 0 ? gg.segment->first : gg.segment->second) = b;
            } else {
                gg.hairs[i].second = b;
            }
            RingElement cc = coeff;
            cc *= c * Rational(sign);
            out.add_presentation(gg, cc);
        }
    }
}

// delta_split: sum over vertices and unordered 2-partitions of the star with
// both sides of valence >= 2 (so >= 3 after adding the new edge).  Acts on
// the graph block only: extract the vertex, create [v, v', e_new]; the new
// edge sits first in the raw edge list, directed from the new vertex to the
// old one (both pinned by delta^2 = 0 against the join).
void apply_split(const HairyGraph& g, const Ambient& amb, const RingElement& coeff,
                 GraphVector& out) {
    if (g.is_segment()) return;
    const int n = amb.n;
    const int pv = n & 1, pe = (n - 1) & 1;
    int V = g.vertices;
    int E = static_cast<int>(g.edges.size());
    int H = static_cast<int>(g.hairs.size());

    for (int v = 0; v < V; ++v) {
        struct Half {
            int kind, index, end;
        };
        std::vector<Half> star;
        for (int e = 0; e < E; ++e) {
            if (g.edges[e].first == v) star.push_back({0, e, 0});
            if (g.edges[e].second == v) star.push_back({0, e, 1});
        }
        for (int h = 0; h < H; ++h)
            if (g.hairs[h].first == v) star.push_back({1, h, 0});
        int s = static_cast<int>(star.size());
        if (s < 4) continue;

        // extraction of v to the end of the G block
        int exp = pv * ((V - 1 - v) * pv + (E + H) * pe);
        // creation order [v, v', e_new]; raw slots v, V, first edge slot:
        // odd inversions of ([kept G cells][v, v', e_new] -> raw)
        {
            std::vector<std::pair<int, bool>> items;
            for (int u = 0; u < V; ++u) {
                if (u == v) continue;
                items.push_back({u, pv != 0});
            }
            int edge_base = V + 1;
            for (int e = 0; e < E; ++e) items.push_back({edge_base + 1 + e, pe != 0});
            int hair_base = edge_base + E + 1;
            for (int h = 0; h < H; ++h) items.push_back({hair_base + h, pe != 0});
            items.push_back({v, pv != 0});
            items.push_back({V, pv != 0});
            items.push_back({edge_base, pe != 0});
            if (odd_inv_sign(items) < 0) exp += 1;
        }
        int sign0 = (exp & 1) ? -1 : 1;

        subsets_of_size_at_least(s - 1, 2, [&](const std::vector<int>& sel) {
            if (static_cast<int>(sel.size()) > s - 2) return;
            HairyGraph gg = g;
            gg.vertices = V + 1;
            for (int k : sel) {
                const Half& hf = star[k + 1];  // sel indexes star positions 1..s-1
                if (hf.kind == 0) {
                    auto& e = gg.edges[hf.index];
                    (hf.end == 0 ? e.first : e.second) = V;
                } else {
                    gg.hairs[hf.index].first = V;
                }
            }
            gg.edges.insert(gg.edges.begin(), {V, v});
            RingElement cc = coeff;
            cc *= Rational(sign0);
            out.add_presentation(gg, cc);
        });
    }
}

// joint join across several graphs; for a single graph this is delta_join
// (|S| >= 2), for several it produces the ell_k terms (each S_i >= 1)
void apply_join(const std::vector<const HairyGraph*>& gs, const Ambient& amb,
                const RingElement& coeff, int edge_cap, GraphVector& out) {
    const AlgebraModel& model = *amb.model;
    std::size_t k = gs.size();
    int base_edges = 0;
    for (auto* g : gs) base_edges += g->edge_count();
    if (base_edges + 1 > edge_cap) return;

    // per-graph subsets (nonempty; for k = 1 the total must be >= 2)
    std::vector<std::vector<std::vector<int>>> per_graph;
    for (auto* g : gs) {
        std::vector<std::vector<int>> subs;
        subsets_of_size_at_least(slot_count(*g), 1,
                                 [&](const std::vector<int>& sel) { subs.push_back(sel); });
        per_graph.push_back(std::move(subs));
    }

    std::vector<std::size_t> pick(k, 0);
    while (true) {
        std::vector<std::vector<int>> chosen;
        int m = 0;
        for (std::size_t i = 0; i < k; ++i) {
            chosen.push_back(per_graph[i][pick[i]]);
            m += static_cast<int>(chosen.back().size());
        }
        if (m >= 2) {
            // tree sum: strict models use the one-vertex corolla only
            std::vector<int> labels(m);
            std::iota(labels.begin(), labels.end(), 1);
            std::vector<RootedTree> trees;
            if (model.has_homotopy()) {
                int max_p = edge_cap - base_edges;  // each vertex adds at least one edge
                trees = enumerate_trees(labels, std::max(1, max_p));
            } else {
                std::vector<RootedTree> leaves;
                for (int l : labels) leaves.push_back(RootedTree::leaf_node(l));
                trees = {RootedTree::node(std::move(leaves))};
            }
            for (auto& t : trees) {
                if (t.is_leaf()) continue;
                JoinResult jr = join_geometry(gs, chosen, t, amb);
                if (jr.graph.edge_count() + 1 > edge_cap) continue;
                AlgElement dec = model.rho(t, jr.decorations);
                for (auto& [b, c] : dec) {
                    HairyGraph gg = jr.graph;
                    gg.hairs.push_back({jr.root_vertex, b});
                    RingElement cc = coeff;
                    cc *= c * Rational(jr.sign);
                    out.add_presentation(gg, cc);
                }
            }
        }
        std::size_t i = 0;
        while (i < k && ++pick[i] == per_graph[i].size()) pick[i++] = 0;
        if (i == k) break;
    }
}

}  // namespace

namespace {

enum DiffPieces { kDA = 1, kSplit = 2, kJoin = 4 };

GraphVector differential_pieces(const GraphVector& v, int edge_cap, int pieces) {
    GraphVector out(v.ambient(), v.ring());
    for (auto& [g, c] : v.terms()) {
        // delta(c (x) G) = (-1)^{|c|} c (x) delta(G), per coefficient monomial
        RingElement even(v.ring()), oddc(v.ring());
        for (auto& [m, coef] : c.terms())
            (v.ring()->monomial_parity(m) ? oddc : even).add_term(m, coef);
        for (const RingElement* part : {&even, &oddc}) {
            if (part->is_zero()) continue;
            RingElement cc = *part;
            if (part == &oddc) cc = -cc;
            if (pieces & kDA) apply_dA(g, v.ambient(), cc, out);
            if (pieces & kSplit) apply_split(g, v.ambient(), cc, out);
            if (pieces & kJoin) apply_join({&g}, v.ambient(), cc, edge_cap, out);
        }
    }
    return out;
}

}  // namespace

GraphVector differential(const GraphVector& v, int edge_cap) {
    return differential_pieces(v, edge_cap, kDA | kSplit | kJoin);
}

GraphVector delta_split(const GraphVector& v) { return differential_pieces(v, 0, kSplit); }
GraphVector delta_join(const GraphVector& v, int edge_cap) {
    return differential_pieces(v, edge_cap, kJoin);
}
GraphVector delta_dA(const GraphVector& v) { return differential_pieces(v, 0, kDA); }

GraphVector curvature(const GraphVector& x, const CurvatureOptions& opt) {
    const RingPtr& R = x.ring();
    if (!x.is_homogeneous_of_degree(0))
        throw std::invalid_argument("curvature: x must have total degree 0 in every term");

    GraphVector out(x.ambient(), R);

    // coefficient-ring differential
    if (opt.include_ring_differential) {
        for (auto& [g, c] : x.terms()) {
            RingElement dc = c.differential();
            if (!dc.is_zero()) out.add_canonical(g, dc);
        }
    }

    // k = 1: the graph differential (terms are even, no Koszul sign)
    for (auto& [g, c] : x.terms()) {
        apply_dA(g, x.ambient(), c, out);
        apply_split(g, x.ambient(), c, out);
        apply_join({&g}, x.ambient(), c, opt.edge_cap, out);
    }

    // k >= 2: multisets of terms with coefficient 1/prod(mult!)
    std::vector<std::pair<const HairyGraph*, const RingElement*>> terms;
    for (auto& [g, c] : x.terms()) terms.push_back({&g, &c});
    int nt = static_cast<int>(terms.size());

    std::vector<int> multi;  // term indices, nondecreasing
    std::function<void(int, int)> rec = [&](int start, int remaining) {
        if (!multi.empty() && multi.size() >= 2) {
            // evaluate this multiset
            Rational factor(1);
            {
                int run = 1;
                for (std::size_t i = 1; i <= multi.size(); ++i) {
                    if (i < multi.size() && multi[i] == multi[i - 1]) {
                        ++run;
                    } else {
                        long f = 1;
                        for (int j = 2; j <= run; ++j) f *= j;
                        factor /= Rational(f);
                        run = 1;
                    }
                }
            }
            RingElement coeff = RingElement::constant(R, factor);
            std::vector<const HairyGraph*> gs;
            int base_edges = 0;
            for (int idx : multi) {
                coeff = coeff * (*terms[idx].second);
                gs.push_back(terms[idx].first);
                base_edges += terms[idx].first->edge_count();
            }
            if (!coeff.is_zero() && base_edges + 1 <= opt.edge_cap)
                apply_join(gs, x.ambient(), coeff, opt.edge_cap, out);
        }
        if (remaining == 0) return;
        for (int i = start; i < nt; ++i) {
            multi.push_back(i);
            rec(i, remaining - 1);
            multi.pop_back();
        }
    };
    rec(0, opt.k_max);

    return out;
}

GraphVector ell(const std::vector<GraphVector>& args, int edge_cap) {
    if (args.empty()) throw std::invalid_argument("ell: no arguments");
    if (args.size() == 1) return differential(args[0], edge_cap);
    const RingPtr& base = args[0].ring();
    const Ambient& amb = args[0].ambient();

    int k = static_cast<int>(args.size());
    std::vector<std::pair<std::string, int>> extra;
    std::vector<int> degs(k);
    for (int i = 0; i < k; ++i) {
        std::optional<int> d;
        for (auto& [g, c] : args[i].terms()) {
            int gd = degree(g, amb);
            for (auto& [m, coef] : c.terms()) {
                int t = gd + args[i].ring()->monomial_degree(m);
                if (!d)
                    d = t;
                else if (*d != t)
                    throw std::invalid_argument("ell: arguments must be homogeneous");
            }
        }
        degs[i] = d.value_or(0);
        extra.push_back({"__e" + std::to_string(i + 1), -degs[i]});
    }
    RingPtr ext = CoefficientRing::extend(base, extra);

    GraphVector x(amb, ext);
    for (int i = 0; i < k; ++i) {
        RingElement eps = RingElement::generator(ext, "__e" + std::to_string(i + 1));
        for (auto& [g, c] : args[i].terms()) {
            RingElement cc = eps * lift_to(c, ext);
            x.add_canonical(g, cc);
        }
    }

    // only multisets of size exactly k contribute to the eps_1...eps_k
    // coefficient; run the multiset expansion directly
    GraphVector out_ext(amb, ext);
    std::vector<std::pair<const HairyGraph*, const RingElement*>> terms;
    for (auto& [g, c] : x.terms()) terms.push_back({&g, &c});
    int nt = static_cast<int>(terms.size());
    std::vector<int> multi;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(multi.size()) == k) {
            Rational factor(1);
            int run = 1;
            for (std::size_t i = 1; i <= multi.size(); ++i) {
                if (i < multi.size() && multi[i] == multi[i - 1]) {
                    ++run;
                } else {
                    long f = 1;
                    for (int j = 2; j <= run; ++j) f *= j;
                    factor /= Rational(f);
                    run = 1;
                }
            }
            RingElement coeff = RingElement::constant(ext, factor);
            std::vector<const HairyGraph*> gs;
            for (int idx : multi) {
                coeff = coeff * (*terms[idx].second);
                gs.push_back(terms[idx].first);
            }
            if (!coeff.is_zero()) apply_join(gs, amb, coeff, edge_cap, out_ext);
            return;
        }
        for (int i = start; i < nt; ++i) {
            multi.push_back(i);
            rec(i);
            multi.pop_back();
        }
    };
    rec(0);

    // extract the coefficient of eps_1 ... eps_k
    std::vector<int> eps_idx;
    for (int i = 0; i < k; ++i) eps_idx.push_back(ext->index_of("__e" + std::to_string(i + 1)));
    GraphVector out(amb, base);
    for (auto& [g, c] : out_ext.terms()) {
        RingElement stripped = c.extract(eps_idx);
        if (stripped.is_zero()) continue;
        // drop residual eps content (terms where some eps appears without
        // the full product have other eps exponents; extract already removed
        // non-divisible monomials, but mixed ones may remain)
        RingElement clean(ext);
        for (auto& [m, coef] : stripped.terms()) {
            bool pure = true;
            for (int e : eps_idx)
                if (m[e] != 0) pure = false;
            if (pure) clean.add_term(m, coef);
        }
        if (clean.is_zero()) continue;
        out.add_canonical(g, project_coeff(clean, base));
    }
    return out;
}

}  // namespace hgcalc

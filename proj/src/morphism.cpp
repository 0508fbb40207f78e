#include "hgcalc/morphism.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "hgcalc/detail/cells.hpp"

namespace hgcalc {

namespace {

using detail::CellWord;
using detail::TreeLayout;
using detail::build_word;
using detail::extraction_sign;
using detail::odd_inv_sign;
using detail::realize_tree;

}  // namespace

AlgElement HomotopyMorphism::eval(const RootedTree& t, const std::vector<int>& args) const {
    if (static_cast<int>(args.size()) != t.leaf_count())
        throw std::invalid_argument("psi: arity mismatch");
    ShapeForm sf = shape_canonical(t);
    std::vector<int> ordered(args.size());
    int inv = 0;
    for (std::size_t k = 0; k < args.size(); ++k) ordered[k] = args[sf.leaf_sources[k] - 1];
    for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t j = i + 1; j < args.size(); ++j)
            if (sf.leaf_sources[i] > sf.leaf_sources[j] &&
                source->degree_of(ordered[i]) % 2 != 0 && source->degree_of(ordered[j]) % 2 != 0)
                ++inv;
    auto it = tables.find(sf.tree.key());
    if (it == tables.end()) return {};
    auto jt = it->second.find(ordered);
    if (jt == it->second.end()) return {};
    AlgElement out = jt->second;
    if (inv & 1)
        for (auto& [k, c] : out) c = -c;
    return out;
}

namespace {

struct Slot {
    std::size_t graph;
    int index;  // hair index; segments: end 0/1
};

void set_partitions(int n, const std::function<void(const std::vector<std::vector<int>>&)>& f) {
    if (n == 0) {
        f({});
        return;
    }
    std::vector<int> assign(n, 0);
    std::function<void(int, int)> rec = [&](int i, int maxb) {
        if (i == n) {
            std::vector<std::vector<int>> blocks(maxb + 1);
            for (int k = 0; k < n; ++k) blocks[assign[k]].push_back(k);
            f(blocks);
            return;
        }
        for (int b = 0; b <= maxb + 1; ++b) {
            assign[i] = b;
            rec(i + 1, std::max(maxb, b));
        }
    };
    rec(1, 0);
}

bool output_connected(const HairyGraph& g) {
    if (g.is_segment()) return true;
    if (g.vertices == 0) return false;
    std::vector<int> par(g.vertices);
    std::iota(par.begin(), par.end(), 0);
    std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
    for (auto& [u, v] : g.edges) par[find(u)] = find(v);
    for (int v = 1; v < g.vertices; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

// One forest applied to a tuple of graphs: realize each non-trivial block's
// tree, map trivial hairs through the linear part in place, and emit all
// multilinear expansions into `out`.
void emit_forest_terms(const HomotopyMorphism& psi, const std::vector<const HairyGraph*>& gs,
                       const std::vector<Slot>& slots,
                       const std::vector<std::vector<int>>& blocks,
                       const std::vector<std::size_t>& nontrivial,
                       const std::vector<const RootedTree*>& trees, const RingElement& coeff,
                       const Ambient& src_amb, const Ambient& tgt_amb, int edge_cap,
                       GraphVector& out) {
    const AlgebraModel& A = *psi.source;
    int n = src_amb.n;
    RootedTree trivial = RootedTree::leaf_node(1);

    // block id per slot; -1 = trivial singleton
    std::vector<int> block_of(slots.size(), -1);
    for (std::size_t q = 0; q < nontrivial.size(); ++q)
        for (int m : blocks[nontrivial[q]]) block_of[m] = static_cast<int>(q);

    // per-segment consumed-end count
    std::vector<int> seg_consumed(gs.size(), 0);
    for (std::size_t s = 0; s < slots.size(); ++s)
        if (gs[slots[s].graph]->is_segment() && block_of[s] >= 0) seg_consumed[slots[s].graph]++;

    // all-trivial single segment: the output is a segment again
    bool all_graphs_segments_trivial = true;
    for (std::size_t i = 0; i < gs.size(); ++i)
        if (!gs[i]->is_segment() || seg_consumed[i] > 0) all_graphs_segments_trivial = false;
    if (all_graphs_segments_trivial) {
        if (gs.size() != 1) return;  // several disjoint segments: disconnected
        auto [a, b] = *gs[0]->segment;
        AlgElement va = psi.eval(trivial, {a});
        AlgElement vb = psi.eval(trivial, {b});
        for (auto& [ia, ca] : va)
            for (auto& [ib, cb] : vb) {
                RingElement cc = coeff;
                cc *= ca * cb;
                out.add_presentation(HairyGraph::make_segment(ia, ib), cc);
            }
        return;
    }
    // a both-trivial segment among several graphs stays disconnected
    for (std::size_t i = 0; i < gs.size(); ++i)
        if (gs[i]->is_segment() && seg_consumed[i] == 0) return;

    CellWord w = build_word(gs, src_amb);

    // vertex offsets and per-block tree layouts
    std::vector<int> voff(gs.size());
    int vtotal = 0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        voff[i] = vtotal;
        vtotal += gs[i]->is_segment() ? 0 : gs[i]->vertices;
    }
    std::vector<TreeLayout> lay;
    std::vector<int> tree_off(nontrivial.size());
    int vat = vtotal;
    int tree_edges_total = 0;
    for (std::size_t q = 0; q < nontrivial.size(); ++q) {
        lay.push_back(realize_tree(*trees[q]));
        tree_off[q] = vat;
        vat += lay.back().vertex_count;
        tree_edges_total += static_cast<int>(lay.back().edges.size());
    }

    // leaf index of each consumed slot inside its block (1-based)
    std::vector<int> leaf_of(slots.size(), 0);
    for (std::size_t q = 0; q < nontrivial.size(); ++q) {
        int l = 1;
        for (int m : blocks[nontrivial[q]]) leaf_of[m] = l++;
    }
    auto target_vertex = [&](int slot_idx) {
        int q = block_of[slot_idx];
        return tree_off[q] + lay[q].leaf_parent[leaf_of[slot_idx] - 1];
    };

    // consumption: per block the member hair/dec cells, then segment merges
    std::vector<int> removed;
    std::vector<std::vector<int>> block_args(nontrivial.size());
    for (std::size_t q = 0; q < nontrivial.size(); ++q) {
        for (int m : blocks[nontrivial[q]]) {
            const Slot& sl = slots[m];
            if (gs[sl.graph]->is_segment()) {
                removed.push_back(w.graphs[sl.graph].cell_segdec(sl.index));
                block_args[q].push_back(sl.index == 0 ? gs[sl.graph]->segment->first
                                                      : gs[sl.graph]->segment->second);
            } else {
                removed.push_back(w.graphs[sl.graph].cell_hair(sl.index));
                block_args[q].push_back(gs[sl.graph]->hairs[sl.index].second);
            }
        }
    }
    struct Merged {
        std::size_t graph;
        int surviving_dec;      // source decoration (mapped through psi_|)
        int target;             // vertex carrying the merged hair
    };
    std::vector<Merged> merged;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!gs[i]->is_segment() || seg_consumed[i] != 1) continue;
        int consumed_slot = -1, surv = -1;
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (slots[s].graph != i) continue;
            if (block_of[s] >= 0)
                consumed_slot = static_cast<int>(s);
            else
                surv = slots[s].index;
        }
        removed.push_back(w.graphs[i].cell_segedge());
        removed.push_back(w.graphs[i].cell_segdec(surv));
        merged.push_back({i, surv == 0 ? gs[i]->segment->first : gs[i]->segment->second,
                          target_vertex(consumed_slot)});
    }

    int sign = extraction_sign(w, removed);

    // raw layout bookkeeping
    int out_vertices = vat;
    int edge_base = out_vertices;
    int n_kept_edges = 0;
    for (std::size_t i = 0; i < gs.size(); ++i)
        n_kept_edges += gs[i]->is_segment() ? (seg_consumed[i] == 2 ? 1 : 0)
                                            : static_cast<int>(gs[i]->edges.size());
    int n_leaf_edges = 0;
    for (std::size_t s = 0; s < slots.size(); ++s)
        if (block_of[s] >= 0 && !gs[slots[s].graph]->is_segment()) ++n_leaf_edges;
    int tree_edge_base = edge_base + n_kept_edges;
    int hair_base = tree_edge_base + tree_edges_total + n_leaf_edges;

    std::vector<std::pair<int, bool>> virt;  // kept (input order) then new (creation order)
    {
        // kept cells with raw positions
        std::vector<int> graph_edge_start(gs.size());
        {
            int at = edge_base;
            for (std::size_t i = 0; i < gs.size(); ++i) {
                graph_edge_start[i] = at;
                at += gs[i]->is_segment() ? (seg_consumed[i] == 2 ? 1 : 0)
                                          : static_cast<int>(gs[i]->edges.size());
            }
        }
        std::vector<int> graph_hair_start(gs.size());
        {
            int at = hair_base;
            for (std::size_t i = 0; i < gs.size(); ++i) {
                graph_hair_start[i] = at;
                if (!gs[i]->is_segment())
                    for (std::size_t s = 0; s < slots.size(); ++s)
                        if (slots[s].graph == i && block_of[s] < 0) ++at;
            }
        }
        for (std::size_t i = 0; i < gs.size(); ++i) {
            auto& gc = w.graphs[i];
            if (gs[i]->is_segment()) {
                if (seg_consumed[i] == 2)
                    virt.push_back({graph_edge_start[i], w.edge_parity != 0});
                // trivial-trivial handled earlier; one-end: all cells removed
            } else {
                for (int v = 0; v < gc.vertices; ++v)
                    virt.push_back({voff[i] + v, w.vertex_parity != 0});
                for (int e = 0; e < gc.edges; ++e)
                    virt.push_back({graph_edge_start[i] + e, w.edge_parity != 0});
                int at = graph_hair_start[i];
                for (int h = 0; h < gc.hairs; ++h) {
                    // trivial hairs keep their cell (decoration replaced,
                    // degree preserved by the linear part)
                    bool kept = true;
                    for (std::size_t s = 0; s < slots.size(); ++s)
                        if (slots[s].graph == i && slots[s].index == h && block_of[s] >= 0)
                            kept = false;
                    if (!kept) continue;
                    int par = (n - 1 + A.degree_of(gs[i]->hairs[h].second)) & 1;
                    virt.push_back({at++, par != 0});
                }
            }
        }
        // new cells in creation order: per block vertices/edges/leaf edges,
        // then merged hairs, then root hairs
        int te_at = tree_edge_base;
        int le_at = tree_edge_base + tree_edges_total;
        for (std::size_t q = 0; q < nontrivial.size(); ++q) {
            for (int v = 0; v < lay[q].vertex_count; ++v)
                virt.push_back({tree_off[q] + v, w.vertex_parity != 0});
            for (std::size_t e = 0; e < lay[q].edges.size(); ++e)
                virt.push_back({te_at++, w.edge_parity != 0});
            for (int m : blocks[nontrivial[q]])
                if (!gs[slots[m].graph]->is_segment())
                    virt.push_back({le_at++, w.edge_parity != 0});
        }
        int survivors = 0;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (block_of[s] < 0 && !gs[slots[s].graph]->is_segment()) ++survivors;
        int merged_base = hair_base + survivors;
        for (std::size_t mi = 0; mi < merged.size(); ++mi) {
            int par = (n - 1 + A.degree_of(merged[mi].surviving_dec)) & 1;
            virt.push_back({merged_base + static_cast<int>(mi), par != 0});
        }
        int root_at = merged_base + static_cast<int>(merged.size());
        for (std::size_t q = 0; q < nontrivial.size(); ++q) {
            int deg = -lay[q].vertex_count;
            for (int a : block_args[q]) deg += A.degree_of(a);
            virt.push_back({root_at++, ((n - 1 + deg) & 1) != 0});
        }
        sign *= odd_inv_sign(virt);
    }

    // geometry
    HairyGraph base_out;
    base_out.vertices = out_vertices;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i]->is_segment()) {
            if (seg_consumed[i] == 2) {
                int sa = -1, sb = -1;
                for (std::size_t s = 0; s < slots.size(); ++s) {
                    if (slots[s].graph != i) continue;
                    (slots[s].index == 0 ? sa : sb) = static_cast<int>(s);
                }
                base_out.edges.push_back({target_vertex(sa), target_vertex(sb)});
            }
        } else {
            for (auto& [u, v] : gs[i]->edges) base_out.edges.push_back({voff[i] + u, voff[i] + v});
        }
    }
    for (std::size_t q = 0; q < nontrivial.size(); ++q)
        for (auto& [p, c] : lay[q].edges)
            base_out.edges.push_back({tree_off[q] + p, tree_off[q] + c});
    for (std::size_t q = 0; q < nontrivial.size(); ++q)
        for (int m : blocks[nontrivial[q]]) {
            if (gs[slots[m].graph]->is_segment()) continue;
            int u = gs[slots[m].graph]->hairs[slots[m].index].first;
            base_out.edges.push_back({voff[slots[m].graph] + u, target_vertex(m)});
        }

    if (base_out.edge_count() > edge_cap) return;
    if (!output_connected(base_out)) return;

    // multilinear expansion: trivial hairs through psi_|, merged decs through
    // psi_|, block roots through psi_T
    struct HairChoice {
        int vertex;
        AlgElement value;  // over the target model
    };
    std::vector<HairChoice> choices;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (gs[i]->is_segment()) continue;
        for (int h = 0; h < static_cast<int>(gs[i]->hairs.size()); ++h) {
            bool kept = true;
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (slots[s].graph == i && slots[s].index == h && block_of[s] >= 0) kept = false;
            if (!kept) continue;
            choices.push_back({voff[i] + gs[i]->hairs[h].first,
                               psi.eval(trivial, {gs[i]->hairs[h].second})});
        }
    }
    for (auto& m : merged) choices.push_back({m.target, psi.eval(trivial, {m.surviving_dec})});
    for (std::size_t q = 0; q < nontrivial.size(); ++q)
        choices.push_back({tree_off[q] + lay[q].root, psi.eval(*trees[q], block_args[q])});

    for (auto& ch : choices)
        if (ch.value.empty()) return;

    std::vector<std::vector<std::pair<int, Rational>>> flat;
    for (auto& ch : choices) flat.emplace_back(ch.value.begin(), ch.value.end());
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
        HairyGraph g = base_out;
        Rational c(1);
        for (std::size_t i = 0; i < choices.size(); ++i) {
            g.hairs.push_back({choices[i].vertex, flat[i][pick[i]].first});
            c *= flat[i][pick[i]].second;
        }
        RingElement cc = coeff;
        cc *= c * Rational(sign);
        out.add_presentation(g, cc);
        std::size_t i = 0;
        while (i < choices.size() && ++pick[i] == flat[i].size()) pick[i++] = 0;
        if (i == choices.size()) break;
    }
}

}  // namespace

GraphVector apply_homotopy_morphism(const HomotopyMorphism& psi,
                                    const std::vector<GraphVector>& args, int edge_cap) {
    if (args.empty()) throw std::invalid_argument("apply_homotopy_morphism: no arguments");
    if (!psi.has_linear_part())
        throw std::invalid_argument("apply_homotopy_morphism: psi tables lack the linear part");
    const Ambient src_amb = args[0].ambient();
    Ambient tgt_amb{psi.target, src_amb.n};
    const RingPtr ring = args[0].ring();
    std::size_t r = args.size();

    GraphVector out(tgt_amb, ring);

    std::vector<std::vector<std::pair<const HairyGraph*, const RingElement*>>> term_lists(r);
    for (std::size_t i = 0; i < r; ++i) {
        for (auto& [g, c] : args[i].terms()) term_lists[i].push_back({&g, &c});
        if (term_lists[i].empty()) return out;
    }

    std::vector<std::size_t> pick(r, 0);
    while (true) {
        std::vector<const HairyGraph*> gs(r);
        RingElement coeff = RingElement::constant(ring, Rational(1));
        // Koszul signs from moving each term's coefficient left past the
        // earlier graphs
        int acc_graph_parity = 0;
        for (std::size_t i = 0; i < r; ++i) {
            gs[i] = term_lists[i][pick[i]].first;
            const RingElement& c = *term_lists[i][pick[i]].second;
            RingElement adjusted(ring);
            for (auto& [mono, v] : c.terms()) {
                Rational vv = v;
                if ((ring->monomial_parity(mono) & 1) && (acc_graph_parity & 1)) vv = -vv;
                adjusted.add_term(mono, vv);
            }
            coeff = coeff * adjusted;
            acc_graph_parity += std::abs(degree(*gs[i], src_amb)) & 1;
        }

        if (!coeff.is_zero()) {
            std::vector<Slot> slots;
            for (std::size_t i = 0; i < r; ++i) {
                int cnt = gs[i]->is_segment() ? 2 : static_cast<int>(gs[i]->hairs.size());
                for (int s = 0; s < cnt; ++s) slots.push_back({i, s});
            }
            set_partitions(
                static_cast<int>(slots.size()),
                [&](const std::vector<std::vector<int>>& blocks) {
                    std::vector<std::size_t> nontrivial;
                    for (std::size_t b = 0; b < blocks.size(); ++b)
                        if (blocks[b].size() >= 2) nontrivial.push_back(b);
                    std::vector<std::vector<RootedTree>> tree_choices;
                    for (std::size_t b : nontrivial) {
                        std::vector<int> labels(blocks[b].size());
                        std::iota(labels.begin(), labels.end(), 1);
                        tree_choices.push_back(enumerate_trees(labels, std::max(1, edge_cap)));
                        if (tree_choices.back().empty()) return;
                    }
                    std::vector<std::size_t> tpick(nontrivial.size(), 0);
                    while (true) {
                        std::vector<const RootedTree*> trees(nontrivial.size());
                        for (std::size_t q = 0; q < nontrivial.size(); ++q)
                            trees[q] = &tree_choices[q][tpick[q]];
                        emit_forest_terms(psi, gs, slots, blocks, nontrivial, trees, coeff,
                                          src_amb, tgt_amb, edge_cap, out);
                        std::size_t q = 0;
                        while (q < tpick.size() && ++tpick[q] == tree_choices[q].size())
                            tpick[q++] = 0;
                        if (q == tpick.size()) break;
                    }
                });
        }

        std::size_t i = 0;
        while (i < r && ++pick[i] == term_lists[i].size()) pick[i++] = 0;
        if (i == r) break;
    }
    return out;
}

}  // namespace hgcalc

#include "hgcalc/detail/cells.hpp"

namespace hgcalc::detail {

int odd_inv_sign(const std::vector<std::pair<int, bool>>& items) {
    int s = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!items[i].second) continue;
        for (std::size_t j = i + 1; j < items.size(); ++j)
            if (items[j].second && items[i].first > items[j].first) ++s;
    }
    return (s & 1) ? -1 : 1;
}

CellWord build_word(const std::vector<const HairyGraph*>& gs, const Ambient& amb) {
    CellWord w;
    int n = amb.n;
    w.vertex_parity = n & 1;
    w.edge_parity = (n - 1) & 1;
    const AlgebraModel& model = *amb.model;
    for (auto* g : gs) {
        CellWord::GraphCells gc;
        gc.base = static_cast<int>(w.odd.size());
        if (g->is_segment()) {
            gc.segment = true;
            w.odd.push_back(w.edge_parity);
            w.odd.push_back(model.degree_of(g->segment->first) & 1);
            w.odd.push_back(model.degree_of(g->segment->second) & 1);
        } else {
            gc.vertices = g->vertices;
            gc.edges = static_cast<int>(g->edges.size());
            gc.hairs = static_cast<int>(g->hairs.size());
            for (int v = 0; v < gc.vertices; ++v) w.odd.push_back(w.vertex_parity);
            for (int e = 0; e < gc.edges; ++e) w.odd.push_back(w.edge_parity);
            for (auto& [v, d] : g->hairs) w.odd.push_back((n - 1 + model.degree_of(d)) & 1);
        }
        w.graphs.push_back(gc);
    }
    return w;
}

int extraction_sign(const CellWord& w, const std::vector<int>& removed_in_order) {
    std::vector<int> target(w.odd.size(), -1);
    int kept_count = static_cast<int>(w.odd.size() - removed_in_order.size());
    for (std::size_t r = 0; r < removed_in_order.size(); ++r)
        target[removed_in_order[r]] = kept_count + static_cast<int>(r);
    int next = 0;
    std::vector<std::pair<int, bool>> items(w.odd.size());
    for (std::size_t i = 0; i < w.odd.size(); ++i) {
        if (target[i] < 0) target[i] = next++;
        items[i] = {target[i], w.odd[i]};
    }
    return odd_inv_sign(items);
}

TreeLayout realize_tree(const RootedTree& t) {
    TreeLayout lay;
    lay.leaf_parent.assign(t.leaf_count(), -1);
    std::function<void(const RootedTree&, int)> dfs = [&](const RootedTree& node, int parent) {
        int me = lay.vertex_count++;
        if (parent >= 0) lay.edges.push_back({parent, me});
        for (auto& c : node.children) {
            if (c.is_leaf())
                lay.leaf_parent[c.leaf - 1] = me;
            else
                dfs(c, me);
        }
    };
    dfs(t, -1);
    return lay;
}

void subsets_of_size_at_least(int n, int min_size,
                              const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            if (static_cast<int>(cur.size()) >= min_size) f(cur);
            return;
        }
        rec(i + 1);
        cur.push_back(i);
        rec(i + 1);
        cur.pop_back();
    };
    rec(0);
}

}  // namespace hgcalc::detail

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hgcalc/graph.hpp"
#include "hgcalc/tree.hpp"

namespace hgcalc::detail {

// parity of inversions among odd items; items carry their target position in
// source order
int odd_inv_sign(const std::vector<std::pair<int, bool>>& items);

// Concatenated orientation word of several graph presentations: per graph the
// vertex cells, then the edge cells, then the hair cells (segments: the edge
// cell, then the two decoration cells).
struct CellWord {
    std::vector<bool> odd;
    int vertex_parity = 0, edge_parity = 0;

    struct GraphCells {
        int base = 0;
        int vertices = 0;
        int edges = 0;
        int hairs = 0;
        bool segment = false;
        int cell_vertex(int v) const { return base + v; }
        int cell_edge(int e) const { return base + vertices + e; }
        int cell_hair(int h) const { return base + vertices + edges + h; }
        int cell_segedge() const { return base; }
        int cell_segdec(int i) const { return base + 1 + i; }
    };
    std::vector<GraphCells> graphs;
};

CellWord build_word(const std::vector<const HairyGraph*>& gs, const Ambient& amb);

// sign of permuting the word into [kept cells, input order][removed cells,
// consumption order]
int extraction_sign(const CellWord& w, const std::vector<int>& removed_in_order);

struct TreeLayout {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;  // (parent, child), DFS order
    std::vector<int> leaf_parent;            // per leaf label
    int root = 0;
};

TreeLayout realize_tree(const RootedTree& t);

void subsets_of_size_at_least(int n, int min_size,
                              const std::function<void(const std::vector<int>&)>& f);

}  // namespace hgcalc::detail

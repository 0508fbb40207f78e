#pragma once

#include <string>
#include <vector>

namespace hgcalc {

// Rooted tree with leaves indexed 1..r, every internal vertex of arity >= 2.
// The trivial tree is a single leaf.
struct RootedTree {
    int leaf = -1;                    // >= 1 when this node is a leaf
    std::vector<RootedTree> children; // nonempty exactly when internal

    bool is_leaf() const { return children.empty(); }
    int leaf_count() const;
    int vertex_count() const;  // internal vertices

    // canonical key; children sorted recursively (leaf labels make subtrees
    // distinct, so the sorted form is unique)
    std::string key() const;
    RootedTree canonical() const;

    // leaf indices in left-to-right order of the canonical form
    void leaf_order(std::vector<int>& out) const;

    static RootedTree leaf_node(int index) { return RootedTree{index, {}}; }
    static RootedTree node(std::vector<RootedTree> ch) { return RootedTree{-1, std::move(ch)}; }

    // parse nested parentheses, e.g. "((1,2),3)"; a bare "1" is the trivial tree
    static RootedTree parse(const std::string& s);

    friend bool operator==(const RootedTree& a, const RootedTree& b) {
        return a.key() == b.key();
    }
};

// All leaf-labeled trees on the given labels (root arity >= 2 unless a single
// label, which yields the trivial tree).
std::vector<RootedTree> enumerate_trees(const std::vector<int>& labels, int max_vertices);

// Shape-canonical form: leaves renumbered 1..r in the left-to-right order of
// the sorted tree.  leaf_sources[k] is the original label of the leaf now
// numbered k+1; lookups use the renumbered tree, Koszul signs come from the
// induced permutation of the arguments.
struct ShapeForm {
    RootedTree tree;
    std::vector<int> leaf_sources;
};
ShapeForm shape_canonical(const RootedTree& t);

// Leaf permutations fixing the shape-canonical labeled tree (as label maps
// sigma with canonical(sigma T) == T); used to check table equivariance.
std::vector<std::vector<int>> shape_automorphisms(const RootedTree& canonical_tree);

// Edge contractions T/e over the internal edges of T.
std::vector<RootedTree> contractions(const RootedTree& t);

// Operadic decompositions T = S' o S'': for every internal non-root vertex v,
// (outer tree with v's subtree replaced by a fresh leaf slot, inner subtree).
// The fresh leaf in the outer tree is labeled 0.
struct TreeDecomposition {
    RootedTree outer;
    RootedTree inner;
};
std::vector<TreeDecomposition> decompositions(const RootedTree& t);

}  // namespace hgcalc

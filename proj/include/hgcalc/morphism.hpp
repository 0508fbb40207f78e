#pragma once

#include "hgcalc/graphvec.hpp"

namespace hgcalc {

// Homotopy morphism psi between algebra models, given as tree-indexed tables
// psi_T : A^{(x) r} -> B of degree -p (p internal vertices).  The linear part
// is the trivial-tree table (key "1").
struct HomotopyMorphism {
    ModelPtr source;
    ModelPtr target;
    // key: shape-canonical tree key; value: input tuple (source indices, in
    // canonical leaf order) -> element of the target
    std::map<std::string, std::map<std::vector<int>, AlgElement>> tables;

    // evaluate psi_T with equivariance and Koszul signs; leaf i+1 pairs with
    // args[i]
    AlgElement eval(const RootedTree& t, const std::vector<int>& args) const;
    bool has_linear_part() const { return tables.count("1") > 0; }
};

// The induced L-infinity morphism on hairy graph complexes.  The r-ary
// component sums over forests: every hair of every input goes into some tree
// (possibly trivial); each tree is realized in the output and its root hair
// is decorated by psi_T of the consumed decorations.  Outputs of arity >= 2
// are restricted to connected graphs.
GraphVector apply_homotopy_morphism(const HomotopyMorphism& psi,
                                    const std::vector<GraphVector>& args, int edge_cap = 64);

}  // namespace hgcalc

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hgcalc/algebra.hpp"

namespace hgcalc {

// Ambient data every graph computation needs.
struct Ambient {
    ModelPtr model;
    int n = 0;
};

// Connected hairy graph: internal vertices 0..V-1 of valence >= 3, internal
// edges (tadpoles and multi-edges allowed), decorated hairs.  The one graph
// with V = 0 is the segment: a single edge whose two endpoints carry
// decorations.
//
// Orientation is carried implicitly by the presentation: the cell word lists
// the vertices in label order, then the edges in list order (directed as
// stored), then the hairs in list order.  Cell parities are n (vertex), n-1
// (edge) and n-1+|a| (hair decorated by a); the orientation is an ordering of
// the odd cells, plus edge directions when n is odd.
struct HairyGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, int>> hairs;  // (vertex, decoration basis index)
    std::optional<std::pair<int, int>> segment;  // decorations (a, b)

    bool is_segment() const { return segment.has_value(); }
    int edge_count() const;  // internal edges + hairs (segment: 1)
    int hair_count() const { return is_segment() ? 2 : static_cast<int>(hairs.size()); }
    int genus() const;  // first Betti number

    auto operator<=>(const HairyGraph&) const = default;

    static HairyGraph make_segment(int a, int b) {
        HairyGraph g;
        g.segment = {a, b};
        return g;
    }
};

// Canonically labeled graph; comparison and map keys use the presentation.
struct CanonicalGraph {
    HairyGraph graph;
    auto operator<=>(const CanonicalGraph&) const = default;
};

struct Validity {
    bool ok = true;
    std::string reason;
};

Validity is_valid(const HairyGraph& g, const AlgebraModel& model);

// deg = (n-1)#E - n#V - sum |a_i|, hairs counting as edges
int degree(const HairyGraph& g, const Ambient& amb);

// Canonical form with orientation sign: isomorphic inputs give the same
// CanonicalGraph; the sign compares the input orientation with the canonical
// one and is 0 when some automorphism reverses the orientation.
std::pair<CanonicalGraph, int> canonicalize(const HairyGraph& g, const Ambient& amb);

// deterministic one-line text form (canonical presentations only)
std::string graph_text(const HairyGraph& g, const AlgebraModel& model);

HairyGraph graph_from_json_text(const std::string& text, const AlgebraModel& model);
std::string graph_to_json_text(const HairyGraph& g, const AlgebraModel& model);

}  // namespace hgcalc

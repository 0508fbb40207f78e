#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hgcalc/complex.hpp"

namespace hgcalc {

// The complete degree-0 basis of tree graphs (genus 0); Prop-style bounds
// guarantee no genus >= 1 graph has degree <= 0 when Delta >= 0.
std::vector<HairyGraph> degree_zero_tree_basis(const Ambient& amb);

struct Obstruction {
    HairyGraph graph;       // canonical degree -1 tree
    RingElement poly;       // polynomial in the candidate parameters
};

// Curvature of a parametrized candidate sum_i lambda_i b_i over Q[lambda];
// empty iff every parameter value is Maurer-Cartan.
std::vector<Obstruction> mc_obstruction_system(const GraphVector& candidate, int k_max);

// Candidate over the full degree-0 tree basis with parameters named
// "λ1", "λ2", ... in basis order.
GraphVector generic_mc_candidate(const Ambient& amb, const std::vector<HairyGraph>& basis,
                                 RingPtr* ring_out);

// true iff the curvature vanishes inside the certified window
bool verify_mc(const GraphVector& m);

struct GaugeCheck {
    bool ok = false;
    GraphVector endpoint0, endpoint1;  // over Q, evaluations at t = 0, 1
};

// p over Q[t,dt]; true iff its curvature vanishes identically
GaugeCheck gauge_path_check(const GraphVector& p);

// Search for a gauge path between two MC elements: linear interpolation in t
// plus a dt-part with polynomial degree <= t_degree over the degree-1 tree
// basis; the unknowns enter linearly.  Returns the path when found.
std::optional<GraphVector> gauge_path_search(const GraphVector& m0, const GraphVector& m1,
                                             int t_degree = 2);

// Unitrivalent-tree quotient: IHX subspace = delta_split images of trees with
// exactly one 4-valent vertex, the rest trivalent.
struct UTTContext {
    Ambient amb;
    int degree = 0;
    std::vector<HairyGraph> ut_basis;          // unitrivalent trees of this degree
    Echelon ihx;                               // reduced IHX row space
    std::vector<int> retained;                 // non-pivot coordinates (quotient basis)
};

UTTContext utt_context(const Ambient& amb, int degree);

struct UTTElement {
    const UTTContext* ctx = nullptr;
    std::vector<Rational> coords;  // over ctx->ut_basis, IHX-reduced
    bool is_zero() const;
};

UTTElement utt_project(const UTTContext& ctx, const GraphVector& v);

struct UTTH0 {
    int rank = 0;
    std::vector<GraphVector> basis;  // reduced representatives
};

UTTH0 utt_h0(const Ambient& amb);

}  // namespace hgcalc

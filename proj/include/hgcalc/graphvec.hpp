#pragma once

#include <map>

#include "hgcalc/graph.hpp"
#include "hgcalc/ring.hpp"

namespace hgcalc {

// Finite linear combination of canonical hairy graphs with coefficients in a
// parameter ring.  Graphs are stored canonically; adding a non-canonical
// presentation goes through canonicalize first.
class GraphVector {
public:
    GraphVector() = default;
    GraphVector(Ambient amb, RingPtr ring) : amb_(std::move(amb)), ring_(std::move(ring)) {}

    const Ambient& ambient() const { return amb_; }
    const RingPtr& ring() const { return ring_; }
    const std::map<HairyGraph, RingElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // canonicalizes, multiplies by the orientation sign, accumulates
    void add_presentation(const HairyGraph& g, const RingElement& c);
    void add_presentation(const HairyGraph& g, const Rational& c);
    // graph already canonical (callers from enumeration)
    void add_canonical(const HairyGraph& g, const RingElement& c);

    GraphVector& operator+=(const GraphVector& o);
    GraphVector& operator-=(const GraphVector& o);
    GraphVector operator*(const Rational& c) const;

    friend bool operator==(const GraphVector& a, const GraphVector& b) {
        return a.terms_ == b.terms_;
    }

    // every term homogeneous of this total degree (graph + coefficient)?
    bool is_homogeneous_of_degree(int d) const;

    // max over terms of edge count
    int max_edges() const;

    std::string str() const;

private:
    Ambient amb_;
    RingPtr ring_;
    std::map<HairyGraph, RingElement> terms_;
};

// lift a vector into an extension ring
GraphVector lift_vector(const GraphVector& v, const RingPtr& bigger);

// project back to a subring (leading generators); throws if a coefficient
// still involves the extension generators
GraphVector project_vector(const GraphVector& v, const RingPtr& base);

struct CurvatureOptions {
    int k_max = 4;        // largest ell_k expanded
    int edge_cap = 64;    // drop output graphs with more edges than this
    bool include_ring_differential = true;
};

// U(x) = d_ring(x) + sum_k (1/k!) l_k(x,...,x); x must be termwise of total
// degree 0.
GraphVector curvature(const GraphVector& x, const CurvatureOptions& opt);

// The differential delta = d_A + delta_split + delta_join (the k = 1 part of
// the L-infinity structure, without the coefficient-ring differential).
GraphVector differential(const GraphVector& v, int edge_cap = 64);

// individual pieces (delta_split drives the IHX relations; the others are
// exposed for tests)
GraphVector delta_split(const GraphVector& v);
GraphVector delta_join(const GraphVector& v, int edge_cap = 64);
GraphVector delta_dA(const GraphVector& v);

// l_k by graded polarization from U; inputs must be homogeneous.
GraphVector ell(const std::vector<GraphVector>& args, int edge_cap = 64);

}  // namespace hgcalc

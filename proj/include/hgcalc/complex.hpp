#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "hgcalc/graphvec.hpp"
#include "hgcalc/sparse.hpp"

namespace hgcalc {

// Enumerated basis of HGC_{A,n} on a degree interval with an edge bound.
struct ComplexWindow {
    Ambient amb;
    int d_min = 0, d_max = 0;
    int edge_cap = 0;
    std::map<int, std::vector<HairyGraph>> basis;  // per degree, sorted canonical graphs
    std::map<int, bool> certified;                 // completeness per degree

    const std::vector<HairyGraph>& basis_at(int d) const;
    int dim(int d) const;
    std::optional<int> index_of(int d, const HairyGraph& g) const;
    bool certified_range(int lo, int hi) const;
};

// Largest possible edge count (internal edges + hairs) of a graph of degree
// <= d; requires Delta = n - dim(A) - 3 >= 0.
int complete_edge_bound(const Ambient& amb, int d);
int algebraic_codimension(const Ambient& amb);  // Delta

struct WindowOptions {
    int d_min = -2, d_max = 4;
    std::optional<int> edge_cap_override;
    int threads = 1;
    bool trees_only = false;  // restrict to genus-0 graphs
};

ComplexWindow enumerate_basis(const Ambient& amb, const WindowOptions& opt);

// matrix of a degree--1 linear map on the window bases (columns at degree d,
// rows at degree d-1); entries from applying op to each basis graph
SparseMatrix assemble_matrix(const ComplexWindow& win, int d,
                             const std::function<GraphVector(const HairyGraph&)>& op,
                             int threads = 1);

// the differential as matrices for all degrees in the window
std::map<int, SparseMatrix> differential_matrices(const ComplexWindow& win, int threads = 1);

struct HomologyResult {
    int rank = 0;
    bool certified = true;
    std::vector<GraphVector> representatives;
};

// Exact homology at degree d.  delta^2 = 0 is asserted first.  The window
// must be certified on [d-1, d+1] unless allow_uncertified.
HomologyResult homology_at(const ComplexWindow& win, int d,
                           const std::map<int, SparseMatrix>& mats,
                           bool allow_uncertified = false);

// Twisted structure by a Maurer-Cartan element (verified by the caller via
// mcgauge; twist checks (d^m)^2 = 0 on the window).
struct TwistedComplex {
    GraphVector mc;
    std::map<int, SparseMatrix> mats;  // d^m per degree
};

TwistedComplex twist(const ComplexWindow& win, const GraphVector& m, int threads = 1);

// d^m applied to a single graph vector (sum over i of 1/i! l_{i+1}(m,..,m,-))
GraphVector twisted_differential(const GraphVector& m, const GraphVector& v, int edge_cap);
// twisted bracket l_k^m
GraphVector twisted_ell(const GraphVector& m, const std::vector<GraphVector>& args, int edge_cap);

// Finite L-infinity truncation extracted from a window: basis labels with
// degrees and structure constants of l_k (twisted when mc given).
struct LinfTable {
    std::vector<std::string> labels;
    std::vector<int> degrees;
    // constants[k] maps a nondecreasing index tuple to the output vector
    std::map<int, std::map<std::vector<int>, std::vector<Rational>>> constants;
    bool truncation_approximate = true;
};

// positive truncation: degrees >= 2 in full, ker(d: 1 -> 0) in degree 1
LinfTable extract_linf(const ComplexWindow& win, const std::optional<GraphVector>& mc, int k_max,
                       int threads = 1);

}  // namespace hgcalc

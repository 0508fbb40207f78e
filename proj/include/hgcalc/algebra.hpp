#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hgcalc/rational.hpp"
#include "hgcalc/tree.hpp"

namespace hgcalc {

// Element of the algebra as a linear combination of basis indices.
using AlgElement = std::map<int, Rational>;

// Finite-dimensional non-unital graded-commutative algebra model (the
// augmentation ideal of a Sullivan model), with an optional tree-indexed
// collection rho^T of homotopy-commutative higher products.
class AlgebraModel {
public:
    struct BasisElement {
        std::string id;
        int degree = 0;
    };

    std::string name;
    std::vector<BasisElement> basis;
    // full ordered product table; absent key = 0
    std::map<std::pair<int, int>, AlgElement> product;
    std::map<int, AlgElement> differential;
    // homotopy products keyed by canonical tree key and ordered input tuple
    // (inputs listed in the canonical tree's left-to-right leaf order)
    std::map<std::string, std::map<std::vector<int>, AlgElement>> homotopy;

    bool has_homotopy() const { return !homotopy.empty(); }
    int dimension() const;  // max basis degree
    int min_degree() const;
    int degree_of(int i) const { return basis[i].degree; }
    int index_of(const std::string& id) const;
    std::size_t size() const { return basis.size(); }

    AlgElement multiply(const AlgElement& a, const AlgElement& b) const;
    AlgElement multiply_basis(int i, int j) const;
    AlgElement differential_of(int i) const;

    // rho^T for a leaf-labeled tree, multilinear over basis arguments
    // (args[i] pairs with leaf i+1).  Strict models: iterated product for the
    // one-vertex tree, 0 otherwise.
    AlgElement rho(const RootedTree& t, const std::vector<int>& args) const;
    AlgElement rho(const RootedTree& t, const std::vector<AlgElement>& args) const;
};

using ModelPtr = std::shared_ptr<const AlgebraModel>;

struct ValidationIssue {
    std::string rule;
    std::string detail;
};

// Every violated axiom with the offending tuple; empty iff valid.
std::vector<ValidationIssue> validate(const AlgebraModel& model, int tree_bound = 3);

// homotopy-table checks (equivariance, degrees, coherence up to tree_bound
// internal vertices); called from validate when tables are present
void validate_homotopy(const AlgebraModel& model, int tree_bound,
                       std::vector<ValidationIssue>& issues);

// sphere:m | wedge:m1,...,mr | product:sphere:m1,sphere:m2 | disjoint:m1,...,mr
// | s1xs2 | s2xs2
ModelPtr build_builtin(const std::string& spec);

// reduced part of the unital tensor product, with Koszul signs
ModelPtr tensor(const AlgebraModel& a, const AlgebraModel& b);

ModelPtr load_model_json(const std::string& path);
ModelPtr parse_model_json(const std::string& text);
std::string model_to_json(const AlgebraModel& m);

}  // namespace hgcalc

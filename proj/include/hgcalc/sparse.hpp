#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hgcalc/rational.hpp"

namespace hgcalc {

// Sparse matrix over Q.  No explicit zero entries are stored.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::map<std::pair<int, int>, Rational>& entries() const { return entries_; }

    void set(int r, int c, const Rational& v);
    void add(int r, int c, const Rational& v);
    Rational get(int r, int c) const;

    bool is_zero() const { return entries_.empty(); }

    static SparseMatrix identity(int n);
    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);

    std::vector<Rational> apply(const std::vector<Rational>& v) const;

private:
    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, Rational> entries_;
};

// Exact rank over Q via fraction-free (Bareiss-style) elimination on
// denominator-cleared rows, pivoting by smallest bit size.
int rank(const SparseMatrix& m);

// Exact basis of ker(m); size = cols - rank.
std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m);

// dim ker(d_out) - rank(d_in) for a two-step complex; throws if the
// composition d_out * d_in is nonzero (a sign bug upstream).
int homology_rank(const SparseMatrix& d_in, const SparseMatrix& d_out);

// One exact solution of M x = b, if any.
std::optional<std::vector<Rational>> solve_exact(const SparseMatrix& m,
                                                 const std::vector<Rational>& b);

// Row-echelon data used for quotient reductions and membership tests.
struct Echelon {
    // each row: sorted sparse entries, leading column first; pivot entry 1
    std::vector<std::vector<std::pair<int, Rational>>> rows;
    std::vector<int> pivot_cols;  // ascending
    int cols = 0;

    // reduce a vector modulo the row space (exact)
    std::vector<Rational> reduce(std::vector<Rational> v) const;
    bool contains(const std::vector<Rational>& v) const;
};

// Echelon form of the row space of m (reduced; deterministic).
Echelon echelon_form(const SparseMatrix& m);

}  // namespace hgcalc

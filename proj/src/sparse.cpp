#include "hgcalc/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace hgcalc {

void SparseMatrix::set(int r, int c, const Rational& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("SparseMatrix::set");
    if (v.is_zero())
        entries_.erase({r, c});
    else
        entries_[{r, c}] = v;
}

void SparseMatrix::add(int r, int c, const Rational& v) {
    if (v.is_zero()) return;
    auto key = std::make_pair(r, c);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        set(r, c, v);
    } else {
        it->second += v;
        if (it->second.is_zero()) entries_.erase(it);
    }
}

Rational SparseMatrix::get(int r, int c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rational(0) : it->second;
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Rational(1));
    return m;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix: shape mismatch");
    SparseMatrix out(a.rows_, b.cols_);
    // group b by row
    std::map<int, std::vector<std::pair<int, Rational>>> brows;
    for (auto& [rc, v] : b.entries_) brows[rc.first].push_back({rc.second, v});
    for (auto& [rc, va] : a.entries_) {
        auto it = brows.find(rc.second);
        if (it == brows.end()) continue;
        for (auto& [c, vb] : it->second) out.add(rc.first, c, va * vb);
    }
    return out;
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != cols_)
        throw std::invalid_argument("SparseMatrix::apply: size mismatch");
    std::vector<Rational> out(rows_, Rational(0));
    for (auto& [rc, val] : entries_) {
        if (v[rc.second].is_zero()) continue;
        out[rc.first] += val * v[rc.second];
    }
    return out;
}

namespace {

using IntRow = std::map<int, mpz_class>;

// clear denominators rowwise, keep rows as sparse integer maps
std::vector<IntRow> integer_rows(const SparseMatrix& m) {
    std::vector<IntRow> rows(m.rows());
    std::vector<mpz_class> lcm(m.rows(), 1);
    for (auto& [rc, v] : m.entries()) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), lcm[rc.first].get_mpz_t(), v.denominator().get_mpz_t());
        lcm[rc.first] = l;
    }
    for (auto& [rc, v] : m.entries())
        rows[rc.first][rc.second] = v.numerator() * (lcm[rc.first] / v.denominator());
    return rows;
}

// Fraction-free forward elimination; returns the pivot count.  Rows are
// rescaled by exact divisions (Bareiss), keeping all entries integer.
int bareiss_rank(std::vector<IntRow> rows, int cols) {
    int r = 0;
    mpz_class prev_pivot = 1;
    std::vector<bool> used(rows.size(), false);
    for (int step = 0;; ++step) {
        // pivot: smallest bit size, ties by (row, col)
        int pr = -1, pc = -1;
        std::size_t best = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            for (auto& [c, v] : rows[i]) {
                if (v == 0) continue;
                std::size_t bits = mpz_sizeinbase(v.get_mpz_t(), 2);
                if (pr < 0 || bits < best) {
                    best = bits;
                    pr = static_cast<int>(i);
                    pc = c;
                }
            }
        }
        if (pr < 0) break;
        used[pr] = true;
        ++r;
        const mpz_class pivot = rows[pr][pc];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            auto it = rows[i].find(pc);
            if (it == rows[i].end() || it->second == 0) continue;
            const mpz_class factor = it->second;
            IntRow next;
            // next = (pivot * row_i - factor * row_pr) / prev_pivot
            for (auto& [c, v] : rows[i]) {
                mpz_class nv = pivot * v;
                auto jt = rows[pr].find(c);
                if (jt != rows[pr].end()) nv -= factor * jt->second;
                if (nv != 0) next[c] = nv / prev_pivot;
            }
            for (auto& [c, v] : rows[pr]) {
                if (rows[i].count(c)) continue;
                mpz_class nv = -factor * v;
                if (nv != 0) next[c] = nv / prev_pivot;
            }
            next.erase(pc);
            rows[i] = std::move(next);
        }
        prev_pivot = pivot;
    }
    return r;
}

}  // namespace

int rank(const SparseMatrix& m) {
    return bareiss_rank(integer_rows(m), m.cols());
}

Echelon echelon_form(const SparseMatrix& m) {
    // Gauss-Jordan over Q; adequate at the sizes the windows produce, and the
    // reduced form is what the quotient reductions need.
    std::vector<std::map<int, Rational>> rows(m.rows());
    for (auto& [rc, v] : m.entries()) rows[rc.first][rc.second] = v;

    Echelon ech;
    ech.cols = m.cols();
    std::vector<std::map<int, Rational>> done;
    for (int col = 0; col < m.cols(); ++col) {
        int pr = -1;
        std::size_t best = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = rows[i].find(col);
            if (it == rows[i].end() || it->second.is_zero()) continue;
            std::size_t bits = it->second.bit_size();
            if (pr < 0 || bits < best) {
                best = bits;
                pr = static_cast<int>(i);
            }
        }
        if (pr < 0) continue;
        std::map<int, Rational> prow = std::move(rows[pr]);
        rows.erase(rows.begin() + pr);
        Rational inv = Rational(1) / prow[col];
        for (auto& [c, v] : prow) v *= inv;
        for (auto& rw : rows) {
            auto it = rw.find(col);
            if (it == rw.end()) continue;
            Rational f = it->second;
            for (auto& [c, v] : prow) {
                auto jt = rw.find(c);
                if (jt == rw.end()) {
                    Rational nv = -f * v;
                    if (!nv.is_zero()) rw[c] = nv;
                } else {
                    jt->second -= f * v;
                    if (jt->second.is_zero()) rw.erase(jt);
                }
            }
        }
        for (auto& dr : done) {
            auto it = dr.find(col);
            if (it == dr.end()) continue;
            Rational f = it->second;
            for (auto& [c, v] : prow) {
                auto jt = dr.find(c);
                if (jt == dr.end()) {
                    Rational nv = -f * v;
                    if (!nv.is_zero()) dr[c] = nv;
                } else {
                    jt->second -= f * v;
                    if (jt->second.is_zero()) dr.erase(jt);
                }
            }
        }
        ech.pivot_cols.push_back(col);
        done.push_back(std::move(prow));
    }
    for (auto& dr : done)
        ech.rows.push_back(std::vector<std::pair<int, Rational>>(dr.begin(), dr.end()));
    return ech;
}

std::vector<Rational> Echelon::reduce(std::vector<Rational> v) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Rational& lead = v[pivot_cols[i]];
        if (lead.is_zero()) continue;
        Rational f = lead;  // pivot entries are 1
        for (auto& [c, val] : rows[i]) v[c] -= f * val;
    }
    return v;
}

bool Echelon::contains(const std::vector<Rational>& v) const {
    auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x.is_zero(); });
}

std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m) {
    Echelon ech = echelon_form(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : ech.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[free] = Rational(1);
        for (std::size_t i = 0; i < ech.rows.size(); ++i) {
            // row: x_pivot + sum coeff * x_free = 0
            Rational coeff(0);
            for (auto& [c, val] : ech.rows[i])
                if (c == free) coeff = val;
            if (!coeff.is_zero()) v[ech.pivot_cols[i]] = -coeff;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve_exact(const SparseMatrix& m,
                                                 const std::vector<Rational>& b) {
    // echelon of [m | b]; inconsistent when a pivot lands in the b column
    SparseMatrix aug(m.rows(), m.cols() + 1);
    for (auto& [rc, v] : m.entries()) aug.add(rc.first, rc.second, v);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!b[i].is_zero()) aug.add(static_cast<int>(i), m.cols(), b[i]);
    Echelon ech = echelon_form(aug);
    std::vector<Rational> x(m.cols(), Rational(0));
    for (std::size_t r = 0; r < ech.rows.size(); ++r) {
        if (ech.pivot_cols[r] == m.cols()) return std::nullopt;
        // x_pivot = rhs (free variables set to zero)
        Rational rhs(0);
        for (auto& [c, v] : ech.rows[r])
            if (c == m.cols()) rhs = v;
        x[ech.pivot_cols[r]] = rhs;
    }
    return x;
}

int homology_rank(const SparseMatrix& d_in, const SparseMatrix& d_out) {
    if (d_in.cols() == 0 && d_out.rows() == 0) {
        // degenerate shapes are fine, fall through
    }
    if (d_out.cols() != d_in.rows())
        throw std::invalid_argument("homology_rank: shape mismatch");
    SparseMatrix comp = d_out * d_in;
    if (!comp.is_zero())
        throw std::logic_error("homology_rank: d_out * d_in != 0 (sign convention bug upstream)");
    int ker = d_out.cols() - rank(d_out);
    return ker - rank(d_in);
}

}  // namespace hgcalc

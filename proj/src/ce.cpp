#include "hgcalc/ce.hpp"

#include <algorithm>
#include <functional>

namespace hgcalc {

namespace {

// enumerate admissible monomials of the given cohomological degree
void monomials_of_degree(const CoefficientRing& ring, int target,
                         const std::function<void(const Monomial&)>& f) {
    std::size_t N = ring.size();
    Monomial cur(N, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (left == 0) {
            Monomial full = cur;
            f(full);
            return;
        }
        if (i == N) return;
        rec(i + 1, left);
        int d = ring.generators()[i].degree;
        int cap = ring.generators()[i].cap;
        int maxe = cap >= 0 ? cap : left / std::max(1, d);
        for (int e = 1; e <= maxe && e * d <= left; ++e) {
            cur[i] = e;
            rec(i + 1, left - e * d);
        }
        cur[i] = 0;
    };
    if (target == 0) {
        f(cur);
        return;
    }
    rec(0, target);
}

}  // namespace

CEResult ce_cohomology(const LinfTable& table, const CEOptions& opt) {
    CEResult res;
    int N = static_cast<int>(table.labels.size());
    for (int d : table.degrees)
        if (d < 1) throw std::invalid_argument("ce_cohomology: table must be positively graded");

    // dual generators xi_i of cohomological degree d_i, with differential
    // d(xi_i) = sum over brackets hitting b_i
    std::vector<RingGenerator> gens(N);
    for (int i = 0; i < N; ++i) {
        gens[i].name = "x" + std::to_string(i);
        gens[i].degree = table.degrees[i];
    }
    // build a throwaway ring to know the monomial layout, then fill
    // differentials and rebuild
    for (auto& [k, level] : table.constants) {
        for (auto& [tuple, outv] : level) {
            // multiplicity factor 1/prod(mult!)
            Rational factor(1);
            int run = 1;
            for (std::size_t i = 1; i <= tuple.size(); ++i) {
                if (i < tuple.size() && tuple[i] == tuple[i - 1]) {
                    ++run;
                } else {
                    long f = 1;
                    for (int j = 2; j <= run; ++j) f *= j;
                    factor /= Rational(f);
                    run = 1;
                }
            }
            Monomial mono(N, 0);
            for (int j : tuple) mono[j] += 1;
            for (int i = 0; i < N; ++i) {
                if (outv[i].is_zero()) continue;
                gens[i].differential.push_back({mono, outv[i] * factor});
            }
        }
    }
    RingPtr ring = CoefficientRing::make(gens, opt.degree_bound + 2);

    // d^2 on generators
    res.d_squared_zero = true;
    for (int i = 0; i < N; ++i) {
        RingElement xi = RingElement::generator(ring, "x" + std::to_string(i));
        RingElement dd = xi.differential().differential();
        if (!dd.is_zero()) res.d_squared_zero = false;
    }

    res.truncation_approximate = table.truncation_approximate;

    // bases per degree and the differential matrices
    std::map<int, std::vector<Monomial>> bases;
    for (int d = 0; d <= opt.degree_bound + 1; ++d) {
        std::vector<Monomial> b;
        monomials_of_degree(*ring, d, [&](const Monomial& m) { b.push_back(m); });
        std::sort(b.begin(), b.end());
        res.dims[d] = static_cast<int>(b.size());
        bases[d] = std::move(b);
    }
    std::map<int, SparseMatrix> mats;  // d: degree m -> m+1
    for (int d = 0; d <= opt.degree_bound; ++d) {
        const auto& dom = bases[d];
        const auto& cod = bases[d + 1];
        SparseMatrix m(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
        for (std::size_t j = 0; j < dom.size(); ++j) {
            RingElement e(ring);
            e.add_term(dom[j], Rational(1));
            RingElement de = e.differential();
            for (auto& [mono, c] : de.terms()) {
                auto it = std::lower_bound(cod.begin(), cod.end(), mono);
                if (it == cod.end() || *it != mono) continue;  // beyond the bound
                m.add(static_cast<int>(it - cod.begin()), static_cast<int>(j), c);
            }
        }
        mats[d] = std::move(m);
    }

    for (int d = 0; d <= opt.degree_bound; ++d) {
        int ker = mats[d].cols() - rank(mats[d]);
        int im_prev = d == 0 ? 0 : rank(mats[d - 1]);
        res.ranks[d] = ker - im_prev;
    }
    return res;
}

}  // namespace hgcalc

#include <algorithm>
#include <functional>
#include <sstream>

#include "hgcalc/algebra.hpp"

namespace hgcalc {

namespace {

void add_scaled(AlgElement& target, const AlgElement& src, const Rational& c) {
    if (c.is_zero()) return;
    for (auto& [i, v] : src) {
        auto it = target.find(i);
        if (it == target.end()) {
            Rational nv = v * c;
            if (!nv.is_zero()) target[i] = nv;
        } else {
            it->second += v * c;
            if (it->second.is_zero()) target.erase(it);
        }
    }
}

std::string tuple_str(const AlgebraModel& m, const std::vector<int>& args) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < args.size(); ++i) os << (i ? "," : "") << m.basis[args[i]].id;
    os << ")";
    return os.str();
}

int koszul_of_permuted_args(const AlgebraModel& m, const std::vector<int>& args,
                            const std::vector<int>& sigma) {
    // sign of reordering (a_1..a_r) into (a_{sigma^{-1}(1)}, ...): inversions
    // of sigma restricted to odd arguments
    int s = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (m.degree_of(args[i]) % 2 == 0) continue;
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            if (m.degree_of(args[j]) % 2 != 0 && sigma[i] > sigma[j]) ++s;
    }
    return (s & 1) ? -1 : 1;
}

}  // namespace

// The structure relation checked per tree T with p internal vertices and
// r leaves, on every basis tuple:
//
//   d rho^T - (-1)^{1-p} sum_i +/- rho^T(..., d a_i, ...)
//     + sum_e rho^{T/e}
//     - sum_{T = S' o S''} (-1)^{(p'-1)(p''-1)} +/- rho^{S'}(..., rho^{S''}(...), ...) = 0
//
// with the inner +/- the usual operator-past-arguments Koszul signs.  The
// convention is normalized so that strict restrictions of dg commutative
// algebras satisfy the relation identically.
void validate_homotopy(const AlgebraModel& m, int tree_bound,
                       std::vector<ValidationIssue>& issues) {
    auto flag = [&](const std::string& rule, const std::string& detail) {
        issues.push_back({rule, detail});
    };

    int n = static_cast<int>(m.size());

    // table sanity: keys are shape-canonical, tuples have the right arity,
    // values are homogeneous of degree sum + 1 - p
    int max_arity = 2;
    for (auto& [key, table] : m.homotopy) {
        RootedTree t;
        try {
            t = RootedTree::parse(key);
        } catch (const std::exception& e) {
            flag("homotopy", "bad tree key '" + key + "': " + e.what());
            continue;
        }
        if (shape_canonical(t).tree.key() != key)
            flag("homotopy", "tree key '" + key + "' is not shape-canonical");
        int r = t.leaf_count(), p = t.vertex_count();
        max_arity = std::max(max_arity, r);
        for (auto& [args, value] : table) {
            if (static_cast<int>(args.size()) != r) {
                flag("homotopy", "tuple arity mismatch for tree " + key);
                continue;
            }
            int want = 1 - p;
            for (int a : args) want += m.degree_of(a);
            for (auto& [k, c] : value)
                if (m.degree_of(k) != want)
                    flag("homotopy", "rho^" + key + tuple_str(m, args) + " not of degree " +
                                         std::to_string(want));
        }
        if (key == "(1,2)") {
            for (auto& [args, value] : table)
                if (value != m.multiply_basis(args[0], args[1]))
                    flag("homotopy",
                         "rho on the one-vertex tree differs from the product at " +
                             tuple_str(m, args));
        }
        // equivariance under the shape automorphisms
        for (auto& sigma : shape_automorphisms(t)) {
            bool identity = true;
            for (std::size_t i = 0; i < sigma.size(); ++i)
                if (sigma[i] != static_cast<int>(i) + 1) identity = false;
            if (identity) continue;
            for (auto& [args, value] : table) {
                std::vector<int> permuted(args.size());
                for (std::size_t i = 0; i < sigma.size(); ++i) permuted[sigma[i] - 1] = args[i];
                int sign = koszul_of_permuted_args(m, args, sigma);
                AlgElement expect = m.rho(t, permuted);
                AlgElement got = value;
                if (sign < 0)
                    for (auto& [k, c] : got) c = -c;
                if (expect != got)
                    flag("homotopy", "equivariance fails for tree " + key + " at " +
                                         tuple_str(m, args));
            }
        }
    }

    // coherence relation on all trees up to the bounds
    int arity_bound = std::min(max_arity + 1, 4);
    for (int r = 2; r <= arity_bound; ++r) {
        std::vector<int> labels(r);
        for (int i = 0; i < r; ++i) labels[i] = i + 1;
        auto trees = enumerate_trees(labels, tree_bound);
        // dedupe by key (enumerate_trees may emit canonical duplicates)
        std::map<std::string, RootedTree> uniq;
        for (auto& t : trees) uniq[t.key()] = t;

        std::vector<std::vector<int>> tuples;
        {
            std::vector<int> cur(r, 0);
            while (true) {
                tuples.push_back(cur);
                int k = 0;
                while (k < r && ++cur[k] == n) cur[k++] = 0;
                if (k == r) break;
            }
        }

        for (auto& [key, t] : uniq) {
            int p = t.vertex_count();
            auto contr = contractions(t);
            auto decomp = decompositions(t);
            for (auto& args : tuples) {
                AlgElement total;

                // d circ rho^T
                for (auto& [k, c] : m.rho(t, args)) add_scaled(total, m.differential_of(k), c);

                // -(-1)^{1-p} sum_i (-1)^{|a_1..a_{i-1}|} rho^T(..., da_i, ...)
                int op_sign = ((1 - p) % 2 != 0) ? -1 : 1;
                int prefix = 0;
                for (int i = 0; i < r; ++i) {
                    AlgElement di = m.differential_of(args[i]);
                    if (!di.empty()) {
                        std::vector<AlgElement> vargs;
                        for (int j = 0; j < r; ++j)
                            vargs.push_back(j == i ? di : AlgElement{{args[j], Rational(1)}});
                        int s = -op_sign * ((prefix & 1) ? -1 : 1);
                        add_scaled(total, m.rho(t, vargs), Rational(s));
                    }
                    prefix += m.degree_of(args[i]) % 2 != 0 ? 1 : 0;
                }

                // + sum_e rho^{T/e}
                for (auto& tc : contr) add_scaled(total, m.rho(tc, args), Rational(1));

                // - sum (-1)^{(p'-1)(p''-1)} rho^{S'} o rho^{S''}
                for (auto& d : decomp) {
                    int p2 = d.inner.vertex_count();
                    int p1 = p - p2;
                    std::vector<int> inner_leaves;
                    d.inner.leaf_order(inner_leaves);
                    std::sort(inner_leaves.begin(), inner_leaves.end());
                    std::vector<int> inner_args;
                    for (int l : inner_leaves) inner_args.push_back(args[l - 1]);
                    // rho expects leaf labels 1..k; remap ascending
                    std::function<RootedTree(const RootedTree&)> relab_in =
                        [&](const RootedTree& tt) -> RootedTree {
                        if (tt.is_leaf()) {
                            auto it = std::find(inner_leaves.begin(), inner_leaves.end(), tt.leaf);
                            return RootedTree::leaf_node(
                                static_cast<int>(it - inner_leaves.begin()) + 1);
                        }
                        std::vector<RootedTree> ch;
                        for (auto& c : tt.children) ch.push_back(relab_in(c));
                        return RootedTree::node(std::move(ch));
                    };
                    AlgElement inner_val = m.rho(relab_in(d.inner), inner_args);
                    if (inner_val.empty()) continue;

                    // operator Koszul: rho^{S''} of degree 1-p2 passes the
                    // outer args before the graft slot (slot labeled 0 sits at
                    // position min(inner leaves))
                    int slot = inner_leaves[0];
                    int before_par = 0;
                    for (int l = 1; l < slot; ++l)
                        if (std::find(inner_leaves.begin(), inner_leaves.end(), l) ==
                                inner_leaves.end() &&
                            m.degree_of(args[l - 1]) % 2 != 0)
                            ++before_par;
                    // extraction of the inner args (increasing labels) to the
                    // slot position: count odd inversions against the args
                    // they pass (outer args strictly between slot and them)
                    int extract_par = 0;
                    for (std::size_t ii = 0; ii < inner_leaves.size(); ++ii) {
                        int l = inner_leaves[ii];
                        if (m.degree_of(args[l - 1]) % 2 == 0) continue;
                        for (int b = slot; b < l; ++b)
                            if (std::find(inner_leaves.begin(), inner_leaves.end(), b) ==
                                    inner_leaves.end() &&
                                m.degree_of(args[b - 1]) % 2 != 0)
                                ++extract_par;
                    }
                    int sign = 1;
                    if (((1 - p2) % 2 != 0) && (before_par & 1)) sign = -sign;
                    if (extract_par & 1) sign = -sign;
                    if (((p1 - 1) * (p2 - 1)) % 2 != 0) sign = -sign;
                    sign = -sign;

                    // build outer argument list: original outer leaves in
                    // increasing label order with inner_val at the slot
                    std::vector<AlgElement> outer_args;
                    std::vector<int> outer_order;
                    for (int l = 1; l <= r; ++l) {
                        bool is_inner =
                            std::find(inner_leaves.begin(), inner_leaves.end(), l) !=
                            inner_leaves.end();
                        if (l == slot) {
                            outer_args.push_back(inner_val);
                            outer_order.push_back(0);
                        } else if (!is_inner) {
                            outer_args.push_back(AlgElement{{args[l - 1], Rational(1)}});
                            outer_order.push_back(l);
                        }
                    }
                    // relabel the outer tree's leaves (0 and survivors) so
                    // that leaf k+1 pairs with outer_args[k]
                    std::function<RootedTree(const RootedTree&)> relab =
                        [&](const RootedTree& tt) -> RootedTree {
                        if (tt.is_leaf()) {
                            auto it = std::find(outer_order.begin(), outer_order.end(), tt.leaf);
                            return RootedTree::leaf_node(
                                static_cast<int>(it - outer_order.begin()) + 1);
                        }
                        std::vector<RootedTree> ch;
                        for (auto& c : tt.children) ch.push_back(relab(c));
                        return RootedTree::node(std::move(ch));
                    };
                    RootedTree outer = relab(d.outer);
                    add_scaled(total, m.rho(outer, outer_args), Rational(sign));
                }

                if (!total.empty())
                    flag("coherence", "tree " + key + " at " + tuple_str(m, args) + " -> " +
                                          [&] {
                                              std::ostringstream os;
                                              for (auto& [k, c] : total)
                                                  os << c.str() << "*" << m.basis[k].id << " ";
                                              return os.str();
                                          }());
            }
        }
    }
}

}  // namespace hgcalc

#include "hgcalc/complex.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace hgcalc {

const std::vector<HairyGraph>& ComplexWindow::basis_at(int d) const {
    static const std::vector<HairyGraph> empty;
    auto it = basis.find(d);
    return it == basis.end() ? empty : it->second;
}

int ComplexWindow::dim(int d) const { return static_cast<int>(basis_at(d).size()); }

std::optional<int> ComplexWindow::index_of(int d, const HairyGraph& g) const {
    const auto& b = basis_at(d);
    auto it = std::lower_bound(b.begin(), b.end(), g);
    if (it == b.end() || !(*it == g)) return std::nullopt;
    return static_cast<int>(it - b.begin());
}

bool ComplexWindow::certified_range(int lo, int hi) const {
    for (int d = lo; d <= hi; ++d) {
        auto it = certified.find(d);
        if (it == certified.end() || !it->second) return false;
    }
    return true;
}

int algebraic_codimension(const Ambient& amb) {
    return amb.n - amb.model->dimension() - 3;
}

int complete_edge_bound(const Ambient& amb, int d) {
    int delta = algebraic_codimension(amb);
    if (delta < 0)
        throw std::invalid_argument(
            "complete_edge_bound: algebraic codimension n - dim(A) - 3 = " +
            std::to_string(delta) +
            " < 0; completeness is not guaranteed (pass an explicit edge bound to enumerate "
            "anyway, certificates will be false)");
    int n = amb.n;
    int best = 0;
    // segment: degree (n-1) - |a| - |b|
    if (n - 1 - 2 * amb.model->dimension() <= d) best = 1;
    // graphs with V >= 1: deg >= H(1+Delta) + (n-3)(g-1) and
    // #E + #H <= 2H + 3g - 3
    int g_lim = (d - (1 + delta)) / (n - 3) + 1;
    for (int g = 0; g <= std::max(0, g_lim); ++g) {
        long num = d - static_cast<long>(n - 3) * (g - 1);
        if (num < 1 + delta) continue;  // H >= 1 infeasible
        int h_lim = static_cast<int>(num / (1 + delta));
        int cand = 2 * h_lim + 3 * g - 3;
        best = std::max(best, cand);
    }
    return best;
}

namespace {

// all edge multisets of size E over pairs (i <= j) of V vertices
void edge_multisets(int V, int E, const std::function<void(const std::vector<std::pair<int, int>>&)>& f) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < V; ++i)
        for (int j = i; j < V; ++j) slots.push_back({i, j});
    std::vector<std::pair<int, int>> cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t s, int left) {
        if (left == 0) {
            f(cur);
            return;
        }
        if (s == slots.size()) return;
        // multiplicity of slot s: 0..left
        rec(s + 1, left);
        cur.push_back(slots[s]);
        rec(s, left - 1);
        cur.pop_back();
    };
    rec(0, E);
}

bool connected(int V, const std::vector<std::pair<int, int>>& edges) {
    if (V <= 1) return true;
    std::vector<int> par(V);
    std::iota(par.begin(), par.end(), 0);
    std::function<int(int)> find = [&](int x) { return par[x] == x ? x : par[x] = find(par[x]); };
    for (auto& [u, v] : edges) par[find(u)] = find(v);
    for (int v = 1; v < V; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

// undecorated shapes (hair slots carry decoration 0) up to isomorphism;
// (V, E, H) triples whose reachable degree interval misses the window are
// pruned before the edge multisets are expanded
std::vector<HairyGraph> enumerate_shapes(const Ambient& amb, int edge_cap, bool trees_only,
                                         int d_min, int d_max) {
    std::set<HairyGraph> shapes;
    Ambient shape_amb = amb;  // decorations ignored: all zero
    const int n = amb.n;
    const int dec_lo = amb.model->min_degree();
    const int dec_hi = amb.model->dimension();

    int cap = edge_cap;
    for (int V = 1; 3 * V <= 2 * cap; ++V) {
        for (int E = V - 1; E <= cap; ++E) {
            if (trees_only && E != V - 1) break;
            for (int H = std::max(1, 3 * V - 2 * E); E + H <= cap; ++H) {
                int base = (n - 1) * (E + H) - n * V;
                if (base - H * dec_hi > d_max || base - H * dec_lo < d_min) continue;
                edge_multisets(V, E, [&](const std::vector<std::pair<int, int>>& edges) {
                    if (!connected(V, edges)) return;
                    std::vector<int> valence(V, 0);
                    for (auto& [u, v] : edges) {
                        valence[u]++;
                        valence[v]++;
                    }
                    // compositions of H hairs over V vertices
                    std::vector<int> hv(V, 0);
                    std::function<void(int, int)> rec = [&](int v, int left) {
                        if (v == V - 1) {
                            hv[v] = left;
                            for (int i = 0; i < V; ++i)
                                if (valence[i] + hv[i] < 3) return;
                            HairyGraph g;
                            g.vertices = V;
                            g.edges = edges;
                            for (int i = 0; i < V; ++i)
                                for (int k = 0; k < hv[i]; ++k) g.hairs.push_back({i, 0});
                            auto [cg, sign] = canonicalize(g, shape_amb);
                            (void)sign;  // decorated signs decided later
                            shapes.insert(cg.graph);
                            return;
                        }
                        for (int take = 0; take <= left; ++take) {
                            hv[v] = take;
                            rec(v + 1, left - take);
                        }
                    };
                    rec(0, H);
                });
            }
        }
    }
    return {shapes.begin(), shapes.end()};
}

}  // namespace

ComplexWindow enumerate_basis(const Ambient& amb, const WindowOptions& opt) {
    ComplexWindow win;
    win.amb = amb;
    win.d_min = opt.d_min;
    win.d_max = opt.d_max;

    int delta_ok = true;
    std::map<int, int> bound;  // per-degree complete bound
    try {
        for (int d = opt.d_min; d <= opt.d_max; ++d) bound[d] = complete_edge_bound(amb, d);
    } catch (const std::invalid_argument&) {
        delta_ok = false;
        if (!opt.edge_cap_override)
            throw;
    }
    int cap = 0;
    if (opt.edge_cap_override) {
        cap = *opt.edge_cap_override;
    } else {
        for (auto& [d, b] : bound) cap = std::max(cap, b);
    }
    win.edge_cap = cap;
    for (int d = opt.d_min; d <= opt.d_max; ++d)
        win.certified[d] = delta_ok && (!opt.edge_cap_override || bound.count(d)) &&
                           (delta_ok ? cap >= bound[d] : false);

    const AlgebraModel& model = *amb.model;
    int nb = static_cast<int>(model.size());
    std::map<int, std::set<HairyGraph>> acc;

    // segments
    for (int a = 0; a < nb; ++a)
        for (int b = a; b < nb; ++b) {
            HairyGraph s = HairyGraph::make_segment(a, b);
            int d = degree(s, amb);
            if (d < opt.d_min || d > opt.d_max) continue;
            auto [cg, sign] = canonicalize(s, amb);
            if (sign != 0) acc[d].insert(cg.graph);
        }

    // decorated graphs from undecorated shapes
    std::vector<HairyGraph> shapes =
        enumerate_shapes(amb, cap, opt.trees_only, opt.d_min, opt.d_max);

    int nthreads = std::max(1, opt.threads);
    std::vector<std::map<int, std::set<HairyGraph>>> partial(nthreads);
    std::atomic<std::size_t> next{0};
    auto worker = [&](int tid) {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= shapes.size()) break;
            const HairyGraph& shape = shapes[i];
            int H = static_cast<int>(shape.hairs.size());
            int fixed = (amb.n - 1) * shape.edge_count() - amb.n * shape.vertices;
            // need fixed - sum|a| in [d_min, d_max]
            int lo = fixed - opt.d_max, hi = fixed - opt.d_min;  // bounds on sum |a|
            std::vector<int> dec(H, 0);
            std::function<void(int, int)> rec = [&](int slot, int sum) {
                if (slot == H) {
                    if (sum < lo || sum > hi) return;
                    HairyGraph g = shape;
                    for (int k = 0; k < H; ++k) g.hairs[k].second = dec[k];
                    auto [cg, sign] = canonicalize(g, amb);
                    if (sign != 0) partial[tid][fixed - sum].insert(cg.graph);
                    return;
                }
                int remaining = H - slot - 1;
                for (int b = 0; b < nb; ++b) {
                    int s2 = sum + model.degree_of(b);
                    if (s2 + remaining * model.min_degree() > hi) continue;
                    if (s2 + remaining * model.dimension() < lo) continue;
                    dec[slot] = b;
                    rec(slot + 1, s2);
                }
            };
            rec(0, 0);
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& p : partial)
        for (auto& [d, s] : p) acc[d].insert(s.begin(), s.end());

    for (int d = opt.d_min; d <= opt.d_max; ++d) {
        auto it = acc.find(d);
        if (it == acc.end())
            win.basis[d] = {};
        else
            win.basis[d] = std::vector<HairyGraph>(it->second.begin(), it->second.end());
    }
    return win;
}

SparseMatrix assemble_matrix(const ComplexWindow& win, int d,
                             const std::function<GraphVector(const HairyGraph&)>& op,
                             int threads) {
    const auto& cols = win.basis_at(d);
    const auto& rows = win.basis_at(d - 1);
    SparseMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    bool target_certified = win.certified.count(d - 1) && win.certified.at(d - 1);

    std::vector<std::vector<std::tuple<int, int, Rational>>> partial(std::max(1, threads));
    std::atomic<std::size_t> next{0};
    auto worker = [&](int tid) {
        while (true) {
            std::size_t j = next.fetch_add(1);
            if (j >= cols.size()) break;
            GraphVector dv = op(cols[j]);
            for (auto& [g, c] : dv.terms()) {
                auto idx = win.index_of(d - 1, g);
                if (!idx) {
                    if (target_certified)
                        throw std::logic_error(
                            "assemble_matrix: output term outside a certified basis (" +
                            graph_text(g, *win.amb.model) + ")");
                    continue;
                }
                // coefficients here are plain rationals
                Rational r(0);
                for (auto& [mono, coef] : c.terms()) {
                    bool constant =
                        std::all_of(mono.begin(), mono.end(), [](int e) { return e == 0; });
                    if (!constant)
                        throw std::logic_error("assemble_matrix: non-constant coefficient");
                    r += coef;
                }
                if (!r.is_zero())
                    partial[tid].push_back({*idx, static_cast<int>(j), r});
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& p : partial)
        for (auto& [r, ccol, v] : p) m.add(r, ccol, v);
    return m;
}

std::map<int, SparseMatrix> differential_matrices(const ComplexWindow& win, int threads) {
    std::map<int, SparseMatrix> mats;
    RingPtr Q = CoefficientRing::rationals();
    for (int d = win.d_min + 1; d <= win.d_max; ++d) {
        mats[d] = assemble_matrix(
            win, d,
            [&](const HairyGraph& g) {
                GraphVector v(win.amb, Q);
                v.add_canonical(g, RingElement::constant(Q, Rational(1)));
                return differential(v, win.edge_cap + 2);
            },
            threads);
    }
    return mats;
}

HomologyResult homology_at(const ComplexWindow& win, int d,
                           const std::map<int, SparseMatrix>& mats, bool allow_uncertified) {
    HomologyResult res;
    res.certified = win.certified_range(d - 1, d + 1);
    if (!res.certified && !allow_uncertified)
        throw std::invalid_argument("homology_at: window not certified on [d-1, d+1]");
    auto itd = mats.find(d), itu = mats.find(d + 1);
    if (itd == mats.end() || itu == mats.end())
        throw std::invalid_argument("homology_at: need differentials at degrees d and d+1");
    const SparseMatrix& down = itd->second;  // C_d -> C_{d-1}
    const SparseMatrix& up = itu->second;    // C_{d+1} -> C_d

    SparseMatrix comp = down * up;
    if (!comp.is_zero()) throw std::logic_error("homology_at: delta^2 != 0");

    res.rank = homology_rank(up, down);

    // representatives: kernel vectors independent modulo the image
    auto kernel = kernel_basis(down);
    SparseMatrix image_rows(up.cols(), up.rows());
    for (auto& [rc, v] : up.entries()) image_rows.add(rc.second, rc.first, v);
    Echelon ech = echelon_form(image_rows);

    // greedy selection of kernel vectors independent modulo im(up): keep a
    // growing matrix of image columns plus accepted representatives
    RingPtr Q = CoefficientRing::rationals();
    SparseMatrix span(up.cols() + res.rank, up.rows());
    for (auto& [rc, vv] : up.entries()) span.add(rc.second, rc.first, vv);
    int span_rows = up.cols();
    int span_rank = rank(span);
    for (auto& v : kernel) {
        if (static_cast<int>(res.representatives.size()) >= res.rank) break;
        std::vector<Rational> r = ech.reduce(v);
        if (std::all_of(r.begin(), r.end(), [](const Rational& x) { return x.is_zero(); }))
            continue;
        SparseMatrix trial = span;
        for (int cidx = 0; cidx < static_cast<int>(v.size()); ++cidx)
            if (!v[cidx].is_zero()) trial.add(span_rows, cidx, v[cidx]);
        int trial_rank = rank(trial);
        if (trial_rank <= span_rank) continue;
        span = std::move(trial);
        span_rank = trial_rank;
        ++span_rows;
        GraphVector rep(win.amb, Q);
        const auto& b = win.basis_at(d);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) rep.add_canonical(b[i], RingElement::constant(Q, v[i]));
        res.representatives.push_back(std::move(rep));
    }
    return res;
}

GraphVector twisted_differential(const GraphVector& m, const GraphVector& v, int edge_cap) {
    const Ambient& amb = m.ambient();
    const RingPtr& base = m.ring();
    GraphVector out(amb, base);

    // split v by total degree; one polarization variable per degree
    std::map<int, GraphVector> slices;
    for (auto& [g, c] : v.terms()) {
        for (auto& [mono, coef] : c.terms()) {
            int t = degree(g, amb) + base->monomial_degree(mono);
            auto it = slices.find(t);
            if (it == slices.end()) it = slices.emplace(t, GraphVector(amb, base)).first;
            RingElement e(base);
            e.add_term(mono, coef);
            it->second.add_canonical(g, e);
        }
    }

    for (auto& [deg_t, slice] : slices) {
        RingPtr ext = CoefficientRing::extend(base, {{"__t", -deg_t}});
        GraphVector x = lift_vector(m, ext);
        RingElement eps = RingElement::generator(ext, "__t");
        for (auto& [g, c] : slice.terms()) x.add_canonical(g, eps * lift_to(c, ext));
        CurvatureOptions opt;
        opt.k_max = edge_cap + 2;
        opt.edge_cap = edge_cap;
        opt.include_ring_differential = false;
        GraphVector cur = curvature(x, opt);
        int ei = ext->index_of("__t");
        for (auto& [g, c] : cur.terms()) {
            RingElement stripped = c.extract({ei});
            if (!stripped.is_zero()) {
                RingElement proj(base);
                for (auto& [mono, coef] : stripped.terms()) {
                    bool pure = mono[ei] == 0;
                    if (pure) proj.add_term(Monomial(mono.begin(), mono.end() - 1), coef);
                }
                if (!proj.is_zero()) out.add_canonical(g, proj);
            }
        }
    }
    return out;
}

GraphVector twisted_ell(const GraphVector& m, const std::vector<GraphVector>& args, int edge_cap) {
    const Ambient& amb = m.ambient();
    const RingPtr& base = m.ring();
    int k = static_cast<int>(args.size());

    std::vector<std::pair<std::string, int>> extra;
    for (int i = 0; i < k; ++i) {
        std::optional<int> d;
        for (auto& [g, c] : args[i].terms())
            for (auto& [mono, coef] : c.terms()) {
                int t = degree(g, amb) + base->monomial_degree(mono);
                if (!d)
                    d = t;
                else if (*d != t)
                    throw std::invalid_argument("twisted_ell: arguments must be homogeneous");
            }
        extra.push_back({"__e" + std::to_string(i + 1), -d.value_or(0)});
    }
    RingPtr ext = CoefficientRing::extend(base, extra);
    GraphVector x = lift_vector(m, ext);
    for (int i = 0; i < k; ++i) {
        RingElement eps = RingElement::generator(ext, "__e" + std::to_string(i + 1));
        for (auto& [g, c] : args[i].terms()) x.add_canonical(g, eps * lift_to(c, ext));
    }
    CurvatureOptions opt;
    opt.k_max = edge_cap + 2;
    opt.edge_cap = edge_cap;
    opt.include_ring_differential = false;
    GraphVector cur = curvature(x, opt);

    std::vector<int> eps_idx;
    for (int i = 0; i < k; ++i) eps_idx.push_back(ext->index_of("__e" + std::to_string(i + 1)));
    GraphVector out(amb, base);
    for (auto& [g, c] : cur.terms()) {
        RingElement stripped = c.extract(eps_idx);
        if (stripped.is_zero()) continue;
        RingElement proj(base);
        for (auto& [mono, coef] : stripped.terms()) {
            bool pure = true;
            for (int e : eps_idx)
                if (mono[e] != 0) pure = false;
            if (pure) proj.add_term(Monomial(mono.begin(), mono.begin() + base->size()), coef);
        }
        if (!proj.is_zero()) out.add_canonical(g, proj);
    }
    return out;
}

TwistedComplex twist(const ComplexWindow& win, const GraphVector& m, int threads) {
    TwistedComplex tc;
    tc.mc = m;
    for (int d = win.d_min + 1; d <= win.d_max; ++d) {
        tc.mats[d] = assemble_matrix(
            win, d,
            [&](const HairyGraph& g) {
                GraphVector v(win.amb, m.ring());
                v.add_canonical(g, RingElement::constant(m.ring(), Rational(1)));
                return twisted_differential(m, v, win.edge_cap + 2);
            },
            threads);
    }
    // (d^m)^2 = 0 on the window interior
    for (int d = win.d_min + 2; d <= win.d_max; ++d) {
        if (!win.certified_range(d - 2, d)) continue;
        SparseMatrix comp = tc.mats.at(d - 1) * tc.mats.at(d);
        if (!comp.is_zero()) throw std::logic_error("twist: (d^m)^2 != 0 on the window");
    }
    return tc;
}

LinfTable extract_linf(const ComplexWindow& win, const std::optional<GraphVector>& mc, int k_max,
                       int threads) {
    (void)threads;
    LinfTable table;
    RingPtr Q = CoefficientRing::rationals();
    GraphVector m = mc ? *mc : GraphVector(win.amb, Q);

    // basis elements: kernel of d (possibly twisted) in degree 1, full bases
    // in degrees >= 2
    std::vector<GraphVector> elems;
    auto dmat = [&](int d) {
        return assemble_matrix(
            win, d,
            [&](const HairyGraph& g) {
                GraphVector v(win.amb, Q);
                v.add_canonical(g, RingElement::constant(Q, Rational(1)));
                return mc ? twisted_differential(m, v, win.edge_cap + 2)
                          : differential(v, win.edge_cap + 2);
            },
            1);
    };

    if (win.d_min <= 0 && win.d_max >= 1) {
        SparseMatrix d1 = dmat(1);
        auto ker = kernel_basis(d1);
        const auto& b1 = win.basis_at(1);
        int ki = 0;
        for (auto& v : ker) {
            GraphVector gv(win.amb, Q);
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!v[i].is_zero()) gv.add_canonical(b1[i], RingElement::constant(Q, v[i]));
            elems.push_back(gv);
            table.labels.push_back("ker1_" + std::to_string(ki++));
            table.degrees.push_back(1);
        }
    }
    for (int d = 2; d <= win.d_max; ++d) {
        for (auto& g : win.basis_at(d)) {
            GraphVector gv(win.amb, Q);
            gv.add_canonical(g, RingElement::constant(Q, Rational(1)));
            elems.push_back(gv);
            table.labels.push_back(graph_text(g, *win.amb.model));
            table.degrees.push_back(d);
        }
    }

    int N = static_cast<int>(elems.size());
    // express an output vector in table coordinates (degree >= 2 graphs are
    // basis elements; degree-1 output needs solving in kernel coordinates)
    auto coordinates = [&](const GraphVector& v) -> std::optional<std::vector<Rational>> {
        std::vector<Rational> coords(N, Rational(0));
        for (auto& [g, c] : v.terms()) {
            int d = degree(g, win.amb);
            Rational r(0);
            for (auto& [mono, coef] : c.terms()) r += coef;
            if (r.is_zero()) continue;
            if (d >= 2) {
                bool found = false;
                for (int i = 0; i < N; ++i) {
                    if (table.degrees[i] != d) continue;
                    auto& ts = elems[i].terms();
                    if (ts.size() == 1 && ts.begin()->first == g) {
                        coords[i] += r;
                        found = true;
                        break;
                    }
                }
                if (!found) return std::nullopt;
            } else if (d == 1) {
                // handled below by solving; collect into a dense vector
            } else {
                return std::nullopt;  // output escapes the positive truncation
            }
        }
        // degree-1 part: solve sum x_i ker_i = v_1
        const auto& b1 = win.basis_at(1);
        if (!b1.empty()) {
            std::vector<Rational> target(b1.size(), Rational(0));
            bool has = false;
            for (auto& [g, c] : v.terms()) {
                if (degree(g, win.amb) != 1) continue;
                auto idx = win.index_of(1, g);
                if (!idx) return std::nullopt;
                Rational r(0);
                for (auto& [mono, coef] : c.terms()) r += coef;
                target[*idx] += r;
                has = true;
            }
            if (has) {
                // least-squares-free exact solve via echelon of kernel vectors
                std::vector<int> kcols;
                for (int i = 0; i < N; ++i)
                    if (table.degrees[i] == 1) kcols.push_back(i);
                SparseMatrix K(static_cast<int>(b1.size()), static_cast<int>(kcols.size()));
                for (std::size_t j = 0; j < kcols.size(); ++j)
                    for (auto& [g, c] : elems[kcols[j]].terms()) {
                        Rational r(0);
                        for (auto& [mono, coef] : c.terms()) r += coef;
                        K.add(*win.index_of(1, g), static_cast<int>(j), r);
                    }
                auto sol = solve_exact(K, target);
                if (!sol) return std::nullopt;
                for (std::size_t j = 0; j < kcols.size(); ++j) coords[kcols[j]] += (*sol)[j];
            }
        }
        return coords;
    };

    table.truncation_approximate = true;
    for (int k = 1; k <= k_max; ++k) {
        std::map<std::vector<int>, std::vector<Rational>> level;
        std::vector<int> tuple;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(tuple.size()) == k) {
                std::vector<GraphVector> in;
                for (int t : tuple) in.push_back(elems[t]);
                GraphVector outv = mc ? twisted_ell(m, in, win.edge_cap + 2)
                                      : (k == 1 ? differential(in[0], win.edge_cap + 2)
                                                : ell(in, win.edge_cap + 2));
                if (!outv.is_zero()) {
                    auto coords = coordinates(outv);
                    if (coords) {
                        bool nz = false;
                        for (auto& c : *coords)
                            if (!c.is_zero()) nz = true;
                        if (nz) level[tuple] = *coords;
                    }
                }
                return;
            }
            for (int i = start; i < N; ++i) {
                tuple.push_back(i);
                rec(i);
                tuple.pop_back();
            }
        };
        rec(0);
        if (!level.empty()) table.constants[k] = std::move(level);
    }
    return table;
}

}  // namespace hgcalc

// Acceptance suite: one line per criterion, exact rational arithmetic
// throughout.  Sign-sensitive identities are asserted up to one global sign
// per identity.

#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "hgcalc/ce.hpp"
#include "hgcalc/mc.hpp"
#include "hgcalc/reports.hpp"

using namespace hgcalc;

namespace {

int failures = 0;

struct Criterion {
    std::ostringstream detail;
    bool ok = true;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "    FAILED: " << what << "\n";
        }
    }
};

void report(int num, const std::string& title, Criterion& c) {
    std::cout << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << num << ": " << title << "\n";
    if (!c.ok) {
        std::cout << c.detail.str();
        ++failures;
    }
}

GraphVector single(const Ambient& amb, const HairyGraph& g) {
    RingPtr Q = CoefficientRing::rationals();
    GraphVector v(amb, Q);
    auto [cg, sign] = canonicalize(g, amb);
    if (sign != 0) v.add_canonical(cg.graph, RingElement::constant(Q, Rational(sign)));
    return v;
}

HairyGraph tripod(int a, int b, int c) {
    HairyGraph g;
    g.vertices = 1;
    g.hairs = {{0, a}, {0, b}, {0, c}};
    return g;
}

HairyGraph star4(int a, int b, int c, int d) {
    HairyGraph g;
    g.vertices = 1;
    g.hairs = {{0, a}, {0, b}, {0, c}, {0, d}};
    return g;
}

HairyGraph hgraph(int a, int b, int c, int d) {
    HairyGraph g;
    g.vertices = 2;
    g.edges = {{0, 1}};
    g.hairs = {{0, a}, {0, b}, {1, c}, {1, d}};
    return g;
}

Rational total(const RingElement& c) {
    Rational r(0);
    for (auto& [m, v] : c.terms()) r += v;
    return r;
}

// the model battery of criteria 3, 4 and 10: (model, n) with Delta >= 0
std::vector<std::pair<ModelPtr, int>> battery() {
    std::vector<std::pair<ModelPtr, int>> out;
    std::vector<std::pair<const char*, std::vector<int>>> specs = {
        {"sphere:2", {5, 6, 7, 11}}, {"sphere:3", {6, 7, 11}},   {"wedge:1,1", {5, 6, 7, 11}},
        {"s1xs2", {6, 7, 11}},       {"s2xs2", {7, 11}},         {"disjoint:2,2", {5, 6, 7, 11}},
    };
    for (auto& [spec, ns] : specs) {
        ModelPtr m = build_builtin(spec);
        for (int n : ns) out.push_back({m, n});
    }
    return out;
}

// the widest degree window [-2, hi] whose complete bound stays <= 6
ComplexWindow capped_window(const Ambient& amb, int threads = 1) {
    int hi = 2;
    while (hi > 0 && complete_edge_bound(amb, hi) > 6) --hi;
    WindowOptions opt;
    opt.d_min = -2;
    opt.d_max = hi;
    opt.threads = threads;
    return enumerate_basis(amb, opt);
}

void criterion1() {
    Criterion c;
    {
        Ambient amb{build_builtin("sphere:3"), 7};
        c.require(degree(HairyGraph::make_segment(0, 0), amb) == 0, "deg L_w at (3,7)");
    }
    {
        Ambient amb{build_builtin("sphere:3"), 6};
        c.require(degree(tripod(0, 0, 0), amb) == 0, "deg T_w at (3,6)");
    }
    {
        Ambient amb{build_builtin("s2xs2"), 7};
        int ww = amb.model->index_of("w1w2");
        c.require(degree(HairyGraph::make_segment(0, ww), amb) == 0, "deg L1 (s2xs2)");
        c.require(degree(hgraph(ww, ww, ww, ww), amb) == 0, "deg H (s2xs2)");
        c.require(degree(star4(ww, ww, ww, ww), amb) == 1, "deg X (s2xs2)");
    }
    {
        Ambient amb{build_builtin("s1xs2"), 6};
        int ab = amb.model->index_of("ab");
        c.require(degree(HairyGraph::make_segment(1, ab), amb) == 0, "deg L_b (s1xs2)");
        c.require(degree(tripod(ab, ab, ab), amb) == 0, "deg T_ab (s1xs2)");
        c.require(degree(HairyGraph::make_segment(0, ab), amb) == 1, "deg L_a (s1xs2)");
    }
    report(1, "degree calibration", c);
}

void criterion2() {
    Criterion c;
    for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 6}, {3, 7}, {2, 6}, {2, 7}}) {
        Ambient amb{build_builtin("sphere:" + std::to_string(m)), n};
        auto [cg, sign] = canonicalize(tripod(0, 0, 0), amb);
        bool vanish = (n - m) % 2 == 0;
        c.require((sign == 0) == vanish,
                  "tripod sign at (m,n) = (" + std::to_string(m) + "," + std::to_string(n) + ")");
    }
    // tadpoles at odd n, double edges at even n, over a battery of valid graphs
    for (auto& [model, n] : battery()) {
        Ambient amb{model, n};
        HairyGraph tad;
        tad.vertices = 1;
        tad.edges = {{0, 0}};
        tad.hairs = {{0, 0}};
        if (n % 2 == 1)
            c.require(canonicalize(tad, amb).second == 0, "tadpole at odd n=" + std::to_string(n));
        HairyGraph dbl;
        dbl.vertices = 2;
        dbl.edges = {{0, 1}, {0, 1}};
        dbl.hairs = {{0, 0}, {0, 0}, {1, 0}};
        if (n % 2 == 0)
            c.require(canonicalize(dbl, amb).second == 0,
                      "double edge at even n=" + std::to_string(n));
    }
    report(2, "parity vanishing", c);
}

void criterion3() {
    Criterion c;
    for (auto& [model, n] : battery()) {
        Ambient amb{model, n};
        ComplexWindow win = capped_window(amb);
        c.require(win.edge_cap <= 6, model->name + " n=" + std::to_string(n) + ": cap <= 6");
        auto mats = differential_matrices(win);
        for (int d = win.d_min + 2; d <= win.d_max; ++d) {
            SparseMatrix comp = mats.at(d - 1) * mats.at(d);
            c.require(comp.is_zero(), model->name + " n=" + std::to_string(n) +
                                          ": delta^2 at degree " + std::to_string(d));
        }
    }
    report(3, "delta^2 = 0 on certified windows (E_max <= 6)", c);
}

void criterion4() {
    Criterion c;
    std::mt19937 rng(20260809);
    std::uniform_int_distribution<int> coin(0, 1), numer(-3, 3);
    for (auto& [model, n] : battery()) {
        Ambient amb{model, n};
        ComplexWindow win = capped_window(amb);
        int cap = win.edge_cap + 2;
        RingPtr R = CoefficientRing::make(
            {{"p1", -1, 1, {}}, {"p2", -1, 1, {}}, {"q1", 1, 1, {}}, {"q2", 1, 1, {}}}, 8);
        RingPtr Re = CoefficientRing::extend(R, {{"eps", 1}});
        auto mono_of = [&](int target) -> std::optional<Monomial> {
            for (int mask = 1; mask < 16; ++mask) {
                Monomial m(R->size(), 0);
                int deg = 0;
                for (int i = 0; i < 4; ++i)
                    if (mask & (1 << i)) {
                        m[i] = 1;
                        deg += R->generators()[i].degree;
                    }
                if (deg == target) return m;
            }
            return std::nullopt;
        };
        int trials = 0;
        for (int t = 0; t < 120 && trials < 50; ++t) {
            GraphVector x(amb, R);
            for (auto& [d, basis] : win.basis) {
                auto mono = mono_of(-d);
                if (!mono) continue;
                for (auto& g : basis) {
                    if (coin(rng)) continue;
                    int num = numer(rng);
                    if (num == 0) continue;
                    RingElement ce(R);
                    ce.add_term(*mono, Rational(num, 1 + (t % 3)));
                    x.add_canonical(g, ce);
                }
            }
            if (x.is_zero()) continue;
            ++trials;
            CurvatureOptions opt;
            opt.k_max = 4;
            opt.edge_cap = cap;
            GraphVector ux = curvature(x, opt);
            GraphVector xe = lift_vector(x, Re);
            RingElement eps = RingElement::generator(Re, "eps");
            GraphVector inner = xe;
            for (auto& [g, cc] : ux.terms()) inner.add_canonical(g, eps * lift_to(cc, Re));
            GraphVector lhs = curvature(inner, opt);
            lhs -= curvature(xe, opt);
            c.require(lhs.is_zero(),
                      model->name + " n=" + std::to_string(n) + ": UMC, trial " +
                          std::to_string(trials));
            if (!c.ok) break;
        }
        c.require(trials >= 20 || win.basis_at(0).empty(),
                  model->name + " n=" + std::to_string(n) + ": enough nonzero trials");
        if (!c.ok) break;
    }
    report(4, "L-infinity relations via the UMC identity (50 random elements each)", c);
}

void criterion5() {
    Criterion c;
    Ambient amb{tensor(*build_builtin("sphere:3"), *build_builtin("sphere:3")), 11};
    auto basis = degree_zero_tree_basis(amb);
    c.require(basis.empty(), "degree-0 tree basis of S^3 x S^3 at n = 11 is empty");
    report(5, "S^3 x S^3 finiteness: MC/~ = {0}", c);
}

void criterion6() {
    Criterion c;
    Ambient amb{build_builtin("s2xs2"), 7};
    int ww = amb.model->index_of("w1w2");

    auto basis = degree_zero_tree_basis(amb);
    c.require(basis.size() == 3, "degree-0 basis has 3 elements");
    int segs = 0, hs = 0;
    for (auto& g : basis) {
        if (g.is_segment()) ++segs;
        if (g.vertices == 2) ++hs;
    }
    c.require(segs == 2 && hs == 1, "degree-0 basis = {L1, L2, H}");

    RingPtr ring;
    GraphVector cand = generic_mc_candidate(amb, basis, &ring);
    auto obs = mc_obstruction_system(cand, 4);
    c.require(obs.size() == 1, "single obstruction");
    if (obs.size() == 1) {
        c.require(obs[0].graph.vertices == 1 && obs[0].graph.hairs.size() == 3,
                  "obstruction lives on the tripod");
        c.require(obs[0].poly.terms().size() == 1, "obstruction is a single monomial");
        if (obs[0].poly.terms().size() == 1) {
            auto& [mono, coef] = *obs[0].poly.terms().begin();
            c.require(ring->monomial_str(mono) == "λ1*λ2", "monomial is l1*l2");
            c.require(coef == Rational(1) || coef == Rational(-1), "coefficient +-1");
        }
    }

    GraphVector X = single(amb, star4(ww, ww, ww, ww));
    GraphVector dX = differential(X);
    Rational hcoeff(0);
    for (auto& [g, cc] : dX.terms())
        if (g.vertices == 2) hcoeff = total(cc);
    c.require(hcoeff == Rational(1) || hcoeff == Rational(-1),
              "delta(X) contains H with coefficient +-1 (measured " + hcoeff.str() +
                  "; the three 2+2 star partitions all produce H with equal orientation "
                  "signs, so the faithful coefficient is +-3 -- see the project notes)");

    UTTContext ctx0 = utt_context(amb, 0);
    GraphVector H = single(amb, hgraph(ww, ww, ww, ww));
    c.require(utt_project(ctx0, H).is_zero(), "utt_project(H) = 0");
    UTTContext ctxm1 = utt_context(amb, -1);
    GraphVector T = single(amb, tripod(ww, ww, ww));
    c.require(!utt_project(ctxm1, T).is_zero(), "utt_project(tripod) != 0");

    report(6, "S^2 x S^2 at n = 7: basis, obstruction, boundary, UTT", c);
}

void criterion7() {
    Criterion c;
    Ambient amb{build_builtin("s1xs2"), 6};
    RingPtr Q = CoefficientRing::rationals();
    int ab = amb.model->index_of("ab");

    auto basis = degree_zero_tree_basis(amb);
    c.require(basis.size() == 2, "degree-0 basis has 2 elements");
    c.require(basis.size() == 2 && basis[0].is_segment() && basis[1].vertices == 1,
              "degree-0 basis = {L_b, T_ab}");

    GraphVector La = single(amb, HairyGraph::make_segment(0, ab));
    GraphVector Lb = single(amb, HairyGraph::make_segment(1, ab));
    GraphVector br = ell({La, Lb}, 12);
    c.require(br.size() == 1, "[L_a, L_b] is a single graph");
    if (br.size() == 1) {
        auto& [g, cc] = *br.terms().begin();
        c.require(g.vertices == 1 && g.hairs.size() == 3, "[L_a, L_b] is the tripod");
        Rational r = total(cc);
        c.require(r == Rational(1) || r == Rational(-1), "[L_a, L_b] = +- T_ab");
    }

    RingPtr ring;
    GraphVector cand = generic_mc_candidate(amb, basis, &ring);
    c.require(mc_obstruction_system(cand, 4).empty(), "empty obstruction system");

    // gauge path L_b + t T - (1/c) dt L_a with c the bracket coefficient
    RingPtr omega = CoefficientRing::interval_forms();
    RingElement one = RingElement::constant(omega, Rational(1));
    RingElement t = RingElement::generator(omega, "t");
    RingElement dt = RingElement::generator(omega, "dt");
    auto [LbC, sb] = canonicalize(HairyGraph::make_segment(1, ab), amb);
    auto [TC, st] = canonicalize(tripod(ab, ab, ab), amb);
    auto [LaC, sa] = canonicalize(HairyGraph::make_segment(0, ab), amb);
    Rational bc = total(br.terms().begin()->second);
    GraphVector p(amb, omega);
    p.add_canonical(LbC.graph, one);
    RingElement ct = t;
    if (st < 0) ct = -ct;
    p.add_canonical(TC.graph, ct);
    RingElement ca = dt;
    ca *= Rational(-1) / bc;
    if (sa < 0) ca = -ca;
    p.add_canonical(LaC.graph, ca);
    GaugeCheck res = gauge_path_check(p);
    c.require(res.ok, "gauge path verifies");
    GraphVector m0(amb, Q), m1(amb, Q);
    m0.add_canonical(LbC.graph, RingElement::constant(Q, Rational(1)));
    m1 = m0;
    m1.add_canonical(TC.graph, RingElement::constant(Q, Rational(st)));
    c.require(res.endpoint0 == m0, "endpoint at t = 0 is L_b");
    c.require(res.endpoint1 == m1, "endpoint at t = 1 is L_b + T, so L_b + T ~ L_b");

    report(7, "S^1 x S^2 at n = 6: basis, bracket, MC family, gauge path", c);
}

void criterion8() {
    Criterion c;
    Ambient amb{build_builtin("disjoint:2,2"), 5};
    int i1 = amb.model->index_of("1_1"), i2 = amb.model->index_of("1_2");
    int w1 = amb.model->index_of("w1"), w2 = amb.model->index_of("w2");

    GraphVector m = single(amb, HairyGraph::make_segment(w1, w2));
    c.require(verify_mc(m), "m = seg(w1, w2) is Maurer-Cartan");
    GraphVector S = single(amb, HairyGraph::make_segment(i1, i2));
    GraphVector dS = twisted_differential(m, S, 10);
    c.require(dS.size() == 2, "d^m(S) has two terms");
    for (auto& [g, cc] : dS.terms()) {
        bool tri = g.vertices == 1 && g.hairs.size() == 3;
        std::multiset<int> decs;
        for (auto& [v, d] : g.hairs) decs.insert(d);
        bool decorations_right = decs.count(w1) == 1 && decs.count(w2) == 1 &&
                                 (decs.count(i1) + decs.count(i2) == 1);
        Rational r = total(cc);
        c.require(tri && decorations_right && (r == Rational(1) || r == Rational(-1)),
                  "d^m(S) term is +-tripod(w1, w2, 1_i)");
    }

    ComplexWindow win = capped_window(amb);
    TwistedComplex tc = twist(win, m);
    for (int d = win.d_min + 2; d <= win.d_max; ++d)
        c.require((tc.mats.at(d - 1) * tc.mats.at(d)).is_zero(),
                  "(d^m)^2 = 0 at degree " + std::to_string(d));
    report(8, "Hopf-model twisted differential (disjoint:2,2 at n = 5)", c);
}

void criterion9() {
    Criterion c;
    {
        Ambient amb{build_builtin("sphere:3"), 7};
        ComplexWindow win = enumerate_basis(amb, {-2, 2});
        auto mats = differential_matrices(win);
        HomologyResult h = homology_at(win, 0, mats);
        c.require(h.rank == 1, "H_0 rank 1 at (3,7)");
        c.require(h.representatives.size() == 1 &&
                      h.representatives[0].terms().begin()->first.is_segment(),
                  "representative L_w at (3,7)");
        UTTH0 u = utt_h0(amb);
        c.require(u.rank == 1, "utt_h0 agrees at (3,7)");
    }
    {
        Ambient amb{build_builtin("sphere:3"), 6};
        ComplexWindow win = enumerate_basis(amb, {-2, 2});
        auto mats = differential_matrices(win);
        HomologyResult h = homology_at(win, 0, mats);
        c.require(h.rank == 1, "H_0 rank 1 at (3,6)");
        c.require(h.representatives.size() == 1 &&
                      h.representatives[0].terms().begin()->first.vertices == 1,
                  "representative T_w at (3,6)");
        UTTH0 u = utt_h0(amb);
        c.require(u.rank == 1, "utt_h0 agrees at (3,6)");
    }
    report(9, "H_0 generators of the sphere models", c);
}

void criterion10() {
    Criterion c;
    for (auto& [model, n] : battery()) {
        Ambient amb{model, n};
        int delta = algebraic_codimension(amb);
        int cap = complete_edge_bound(amb, 0) + 2;
        WindowOptions opt;
        opt.d_min = -3 * n;
        opt.d_max = 0;
        opt.edge_cap_override = cap;
        ComplexWindow win = enumerate_basis(amb, opt);
        for (auto& [d, basis] : win.basis) {
            for (auto& g : basis) {
                c.require(g.genus() == 0, model->name + " n=" + std::to_string(n) +
                                              ": non-tree of degree " + std::to_string(d));
                int N = g.hair_count();
                c.require(N * (1 + delta) <= n - 3,
                          model->name + " n=" + std::to_string(n) + ": leaf bound, N = " +
                              std::to_string(N));
                int label_bound = (N - 1) * (1 + delta) + 1;
                if (g.is_segment()) {
                    c.require(model->degree_of(g.segment->first) >= label_bound &&
                                  model->degree_of(g.segment->second) >= label_bound,
                              model->name + " n=" + std::to_string(n) + ": label bound");
                } else {
                    for (auto& [v, dec] : g.hairs)
                        c.require(model->degree_of(dec) >= label_bound,
                                  model->name + " n=" + std::to_string(n) + ": label bound");
                }
            }
        }
    }
    report(10, "tree-only non-positive degrees, leaf and label bounds (at E_max + 2)", c);
}

void criterion11() {
    Criterion c;
    {
        LinfTable t;
        t.labels = {"g"};
        t.degrees = {2};
        t.truncation_approximate = false;
        CEResult r = ce_cohomology(t, {8});
        for (int d = 0; d <= 8; ++d)
            c.require(r.ranks.at(d) == (d % 2 == 0 ? 1 : 0),
                      "even polynomial ranks at degree " + std::to_string(d));
    }
    {
        LinfTable t;
        t.labels = {"g"};
        t.degrees = {3};
        t.truncation_approximate = false;
        CEResult r = ce_cohomology(t, {8});
        for (int d = 0; d <= 8; ++d)
            c.require(r.ranks.at(d) == ((d == 0 || d == 3) ? 1 : 0),
                      "odd exterior ranks at degree " + std::to_string(d));
    }
    {
        LinfTable t;
        t.labels = {"a", "b", "c"};
        t.degrees = {1, 1, 1};
        t.truncation_approximate = false;
        t.constants[2][{0, 1}] = {Rational(0), Rational(0), Rational(1)};
        CEResult r = ce_cohomology(t, {3});
        c.require(r.d_squared_zero, "Heisenberg CE differential squares to zero");
        std::vector<int> want{1, 2, 2, 1};
        for (int d = 0; d <= 3; ++d)
            c.require(r.ranks.at(d) == want[d],
                      "Heisenberg rank at degree " + std::to_string(d));
    }
    report(11, "Chevalley-Eilenberg sanity (abelian even/odd, Heisenberg)", c);
}

void criterion12() {
    Criterion c;
    auto run_reports = [&](int threads) {
        std::ostringstream os;
        for (auto spec : {std::make_pair("sphere:3", 6), std::make_pair("sphere:3", 7),
                          std::make_pair("s2xs2", 7), std::make_pair("s1xs2", 6),
                          std::make_pair("disjoint:2,2", 5)}) {
            Ambient amb{build_builtin(spec.first), spec.second};
            WindowOptions opt;
            opt.d_min = -2;
            opt.d_max = 1;
            opt.threads = threads;
            ComplexWindow win = enumerate_basis(amb, opt);
            auto mats = differential_matrices(win, threads);
            std::map<int, HomologyResult> hom;
            hom[0] = homology_at(win, 0, mats, true);
            os << basis_report(win, spec.first);
            os << window_report(win, hom, spec.first);
        }
        {
            Ambient amb{build_builtin("s2xs2"), 7};
            auto basis = degree_zero_tree_basis(amb);
            RingPtr ring;
            GraphVector cand = generic_mc_candidate(amb, basis, &ring);
            auto obs = mc_obstruction_system(cand, 4);
            os << mc_report(amb, basis, obs, std::nullopt, {});
            UTTH0 u = utt_h0(amb);
            os << utt_report(amb, u, "s2xs2");
        }
        return os.str();
    };
    std::string r1 = run_reports(1);
    std::string r4 = run_reports(4);
    std::string r8 = run_reports(8);
    c.require(r1 == r4, "reports at 1 and 4 threads are byte-identical");
    c.require(r1 == r8, "reports at 1 and 8 threads are byte-identical");
    report(12, "determinism across thread counts 1, 4, 8", c);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}

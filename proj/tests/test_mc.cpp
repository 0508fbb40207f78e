#include <doctest.h>

#include "hgcalc/mc.hpp"
#include "hgcalc/reports.hpp"
#include "test_util.hpp"

using namespace hgcalc;
using namespace hgcalc::testutil;

TEST_CASE("degree-zero tree bases") {
    {
        Ambient amb{tensor(*build_builtin("sphere:3"), *build_builtin("sphere:3")), 11};
        CHECK(degree_zero_tree_basis(amb).empty());
    }
    {
        Ambient amb{build_builtin("s2xs2"), 7};
        auto basis = degree_zero_tree_basis(amb);
        CHECK(basis.size() == 3);
    }
    {
        Ambient amb{build_builtin("s1xs2"), 6};
        auto basis = degree_zero_tree_basis(amb);
        CHECK(basis.size() == 2);
    }
    {
        Ambient low{build_builtin("sphere:3"), 5};
        CHECK_THROWS(degree_zero_tree_basis(low));
    }
}

TEST_CASE("obstruction systems of the worked examples") {
    // s2xs2: single obstruction +-l1*l2 on the tripod; l3 (the H graph) is free
    {
        Ambient amb{build_builtin("s2xs2"), 7};
        auto basis = degree_zero_tree_basis(amb);
        RingPtr ring;
        GraphVector c = generic_mc_candidate(amb, basis, &ring);
        auto obs = mc_obstruction_system(c, 4);
        REQUIRE(obs.size() == 1);
        CHECK(obs[0].graph.vertices == 1);
        std::string poly = poly_str(obs[0].poly);
        bool match = poly == "λ1*λ2" || poly == "-λ1*λ2";
        CHECK_MESSAGE(match, "poly = " << poly);
    }
    // s1xs2: empty system
    {
        Ambient amb{build_builtin("s1xs2"), 6};
        auto basis = degree_zero_tree_basis(amb);
        RingPtr ring;
        GraphVector c = generic_mc_candidate(amb, basis, &ring);
        CHECK(mc_obstruction_system(c, 4).empty());
    }
    // zero candidate
    {
        Ambient amb{build_builtin("s2xs2"), 7};
        GraphVector zero(amb, CoefficientRing::rationals());
        CHECK(mc_obstruction_system(zero, 4).empty());
    }
}

TEST_CASE("verify_mc") {
    {
        Ambient amb{build_builtin("sphere:3"), 7};
        CHECK(verify_mc(single(amb, HairyGraph::make_segment(0, 0))));
    }
    {
        Ambient amb{build_builtin("sphere:3"), 6};
        CHECK(verify_mc(single(amb, tripod(0, 0, 0))));
    }
    {
        Ambient amb{build_builtin("s2xs2"), 7};
        GraphVector m = single(amb, HairyGraph::make_segment(0, 2));
        m += single(amb, HairyGraph::make_segment(1, 2));
        CHECK(!verify_mc(m));
        // each summand alone is MC
        CHECK(verify_mc(single(amb, HairyGraph::make_segment(0, 2))));
    }
}

TEST_CASE("gauge path of the s1xs2 example") {
    Ambient amb{build_builtin("s1xs2"), 6};
    RingPtr omega = CoefficientRing::interval_forms();
    RingElement one = RingElement::constant(omega, Rational(1));
    RingElement t = RingElement::generator(omega, "t");
    RingElement dt = RingElement::generator(omega, "dt");

    auto [Lb, sb] = canonicalize(HairyGraph::make_segment(1, 2), amb);
    auto [T, st] = canonicalize(tripod(2, 2, 2), amb);
    auto [La, sa] = canonicalize(HairyGraph::make_segment(0, 2), amb);
    REQUIRE(sb == 1);
    REQUIRE(st != 0);
    REQUIRE(sa != 0);

    // the bracket fixes the sign of the dt-part: [La, Lb] = c T with c = +-1
    GraphVector LaV = single(amb, HairyGraph::make_segment(0, 2), omega);
    GraphVector LbV = single(amb, HairyGraph::make_segment(1, 2), omega);
    GraphVector br = ell({LaV, LbV}, 12);
    REQUIRE(br.size() == 1);
    Rational c(0);
    for (auto& [mono, v] : br.terms().begin()->second.terms()) c += v;

    // p = Lb + t T - (1/c) dt La  satisfies the MC equation in t, dt
    GraphVector p(amb, omega);
    p.add_canonical(Lb.graph, one);
    RingElement ct = t;
    if (st < 0) ct = -ct;
    p.add_canonical(T.graph, ct);
    RingElement ca = dt;
    ca *= Rational(-1) / c;
    if (sa < 0) ca = -ca;
    p.add_canonical(La.graph, ca);

    GaugeCheck res = gauge_path_check(p);
    CHECK(res.ok);
    // endpoints: Lb and Lb + T
    CHECK(res.endpoint0.size() == 1);
    CHECK(res.endpoint1.size() == 2);

    // constant path
    GraphVector cst(amb, omega);
    cst.add_canonical(Lb.graph, one);
    GaugeCheck res2 = gauge_path_check(cst);
    CHECK(res2.ok);
    CHECK(res2.endpoint0 == res2.endpoint1);

    // dropping the Lb term breaks it: p = t T alone is not MC over Omega
    GraphVector bad(amb, omega);
    bad.add_canonical(T.graph, ct);
    CHECK(!gauge_path_check(bad).ok);

    // gauge implies both endpoints are MC
    CHECK(verify_mc(res.endpoint0));
    CHECK(verify_mc(res.endpoint1));
}

TEST_CASE("gauge path search reproduces the eq:gauge relation") {
    Ambient amb{build_builtin("s1xs2"), 6};
    RingPtr Q = CoefficientRing::rationals();
    auto [Lb, sb] = canonicalize(HairyGraph::make_segment(1, 2), amb);
    auto [T, st] = canonicalize(tripod(2, 2, 2), amb);
    GraphVector m0(amb, Q), m1(amb, Q);
    m0.add_canonical(Lb.graph, RingElement::constant(Q, Rational(1)));
    m1.add_canonical(Lb.graph, RingElement::constant(Q, Rational(1)));
    m1.add_canonical(T.graph, RingElement::constant(Q, Rational(1)));
    auto path = gauge_path_search(m0, m1, 2);
    REQUIRE(path.has_value());
    GaugeCheck res = gauge_path_check(*path);
    CHECK(res.ok);
    CHECK(res.endpoint0 == m0);
    CHECK(res.endpoint1 == m1);

    // but 0 and T alone are not connected by a linear-in-t path: the line
    // t T is not MC for all t?  It is (T is MC and [T,T] = 0 in this model),
    // so instead check a genuinely obstructed pair on s2xs2: 0 vs L1+L2
    Ambient amb2{build_builtin("s2xs2"), 7};
    GraphVector z(amb2, Q);
    GraphVector bad(amb2, Q);
    auto [L1, s1] = canonicalize(HairyGraph::make_segment(0, 2), amb2);
    auto [L2, s2] = canonicalize(HairyGraph::make_segment(1, 2), amb2);
    bad.add_canonical(L1.graph, RingElement::constant(Q, Rational(1)));
    bad.add_canonical(L2.graph, RingElement::constant(Q, Rational(1)));
    // bad is not even MC, so no path exists
    CHECK(!gauge_path_search(z, bad, 2).has_value());
}

TEST_CASE("utt projection and IHX") {
    Ambient amb{build_builtin("s2xs2"), 7};
    int ww = amb.model->index_of("w1w2");
    // degree 0: H dies in the quotient (it is delta_split of the X tree)
    UTTContext ctx0 = utt_context(amb, 0);
    REQUIRE(ctx0.ut_basis.size() == 3);
    GraphVector H = single(amb, hgraph(ww, ww, ww, ww));
    REQUIRE(!H.is_zero());
    CHECK(utt_project(ctx0, H).is_zero());
    // the segments survive
    GraphVector L1 = single(amb, HairyGraph::make_segment(0, ww));
    CHECK(!utt_project(ctx0, L1).is_zero());
    // degree -1: the tripod survives (no IHX in that degree)
    UTTContext ctxm1 = utt_context(amb, -1);
    GraphVector T = single(amb, tripod(ww, ww, ww));
    REQUIRE(!T.is_zero());
    CHECK(!utt_project(ctxm1, T).is_zero());
    // genus >= 1 graphs are killed (tadpole with one hair, degree 2 at n = 8)
    Ambient amb8{build_builtin("s2xs2"), 8};
    HairyGraph loop;
    loop.vertices = 1;
    loop.edges = {{0, 0}};
    loop.hairs = {{0, ww}};
    REQUIRE(degree(loop, amb8) == 2);
    GraphVector lv = single(amb8, loop, CoefficientRing::rationals());
    REQUIRE(!lv.is_zero());
    UTTContext ctxd = utt_context(amb8, 2);
    CHECK(utt_project(ctxd, lv).is_zero());
}

TEST_CASE("utt chain property: project(delta v) = delta_UTT(project v)") {
    Ambient amb{build_builtin("s2xs2"), 7};
    UTTContext c1 = utt_context(amb, 1);
    UTTContext c0 = utt_context(amb, 0);
    RingPtr Q = CoefficientRing::rationals();
    // for every UT tree of degree 1, the two routes agree; since delta_UTT is
    // defined via project . delta on retained representatives, check instead
    // that the IHX subspace is a subcomplex: delta of an IHX generator
    // projects to zero
    WindowOptions sopt;
    sopt.d_min = 1;
    sopt.d_max = 1;
    sopt.trees_only = true;
    ComplexWindow src = enumerate_basis(amb, sopt);
    int checked = 0;
    for (auto& g : src.basis_at(1)) {
        if (g.is_segment()) continue;
        std::vector<int> val(g.vertices, 0);
        for (auto& [u, v] : g.edges) {
            val[u]++;
            val[v]++;
        }
        for (auto& [v, d] : g.hairs) val[v]++;
        int fours = 0;
        bool ok = true;
        for (int v = 0; v < g.vertices; ++v) {
            if (val[v] == 4) ++fours;
            else if (val[v] != 3) ok = false;
        }
        if (!ok || fours != 1) continue;
        GraphVector gv(amb, Q);
        gv.add_canonical(g, RingElement::constant(Q, Rational(1)));
        GraphVector img = delta_split(gv);   // IHX generator at degree 0
        GraphVector dimg = differential(img, src.edge_cap + 3);
        CHECK(utt_project(utt_context(amb, -1), dimg).is_zero());
        ++checked;
    }
    CHECK(checked > 0);
    (void)c1;
    (void)c0;
}

TEST_CASE("utt_h0 of the worked examples") {
    {
        Ambient amb{build_builtin("sphere:3"), 7};
        UTTH0 h = utt_h0(amb);
        CHECK(h.rank == 1);
        REQUIRE(h.basis.size() == 1);
        CHECK(h.basis[0].terms().begin()->first.is_segment());
    }
    {
        Ambient amb{build_builtin("sphere:3"), 6};
        UTTH0 h = utt_h0(amb);
        CHECK(h.rank == 1);
        REQUIRE(h.basis.size() == 1);
        CHECK(h.basis[0].terms().begin()->first.vertices == 1);
    }
    {
        Ambient amb{tensor(*build_builtin("sphere:3"), *build_builtin("sphere:3")), 11};
        CHECK(utt_h0(amb).rank == 0);
    }
}

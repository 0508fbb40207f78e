#include <doctest.h>

#include "hgcalc/morphism.hpp"
#include "hgcalc/reports.hpp"
#include "test_util.hpp"

using namespace hgcalc;
using namespace hgcalc::testutil;

TEST_CASE("homotopy morphism: identity tables act as the identity") {
    ModelPtr m = build_builtin("s2xs2");
    Ambient amb{m, 7};
    HomotopyMorphism psi;
    psi.source = m;
    psi.target = m;
    for (int i = 0; i < static_cast<int>(m->size()); ++i)
        psi.tables["1"][{i}] = AlgElement{{i, Rational(1)}};

    ComplexWindow win = enumerate_basis(amb, {-1, 1});
    for (auto& [d, basis] : win.basis)
        for (auto& g : basis) {
            GraphVector v = single(amb, g);
            GraphVector out = apply_homotopy_morphism(psi, {v}, win.edge_cap + 4);
            CHECK_MESSAGE(out == v, graph_text(g, *m));
        }
}

TEST_CASE("homotopy morphism: vanishing linear part kills decorated hairs") {
    ModelPtr m = build_builtin("s2xs2");
    Ambient amb{m, 7};
    HomotopyMorphism psi;
    psi.source = m;
    psi.target = m;
    // kill w1, keep the others
    for (int i = 1; i < static_cast<int>(m->size()); ++i)
        psi.tables["1"][{i}] = AlgElement{{i, Rational(1)}};

    GraphVector L1 = single(amb, HairyGraph::make_segment(0, 2));  // has a w1 hair
    CHECK(apply_homotopy_morphism(psi, {L1}, 10).is_zero());
    GraphVector L2 = single(amb, HairyGraph::make_segment(1, 2));
    CHECK(apply_homotopy_morphism(psi, {L2}, 10) == L2);
}

TEST_CASE("quasi-isomorphism onto the sphere preserves the class of T") {
    // source: x(3), u(5), z(6) with d(u) = z, all products zero; target:
    // sphere:3; psi_| : x -> w, u, z -> 0 is a strict quasi-isomorphism
    auto src = std::make_shared<AlgebraModel>();
    src->name = "bigsphere";
    src->basis = {{"x", 3}, {"u", 5}, {"z", 6}};
    src->differential[1] = {{2, Rational(1)}};
    REQUIRE(validate(*src).empty());
    ModelPtr tgt = build_builtin("sphere:3");

    HomotopyMorphism psi;
    psi.source = src;
    psi.target = tgt;
    psi.tables["1"][{0}] = AlgElement{{0, Rational(1)}};

    Ambient amb_src{src, 6};
    Ambient amb_tgt{tgt, 6};
    GraphVector Tx = single(amb_src, tripod(0, 0, 0));
    REQUIRE(!Tx.is_zero());
    GraphVector img = apply_homotopy_morphism(psi, {Tx}, 10);
    REQUIRE(!img.is_zero());

    // the image is the tripod T_w, the degree-0 homology generator downstairs
    ComplexWindow win = enumerate_basis(amb_tgt, {-2, 2});
    auto mats = differential_matrices(win);
    HomologyResult h = homology_at(win, 0, mats);
    REQUIRE(h.rank == 1);
    // the image is a cycle and not a boundary
    CHECK(differential(img, win.edge_cap + 2).is_zero());
    std::vector<Rational> coords(win.dim(0), Rational(0));
    for (auto& [g, c] : img.terms()) {
        auto idx = win.index_of(0, g);
        REQUIRE(idx.has_value());
        for (auto& [mono, v] : c.terms()) coords[*idx] += v;
    }
    const SparseMatrix& up = mats.at(1);
    SparseMatrix image_rows(up.cols(), up.rows());
    for (auto& [rc, v] : up.entries()) image_rows.add(rc.second, rc.first, v);
    CHECK(!echelon_form(image_rows).contains(coords));
}

TEST_CASE("graph vector JSON round trip") {
    Ambient amb{build_builtin("s1xs2"), 6};
    RingPtr omega = CoefficientRing::interval_forms();
    GraphVector p(amb, omega);
    auto [Lb, sb] = canonicalize(HairyGraph::make_segment(1, 2), amb);
    auto [T, st] = canonicalize(tripod(2, 2, 2), amb);
    p.add_canonical(Lb.graph, RingElement::constant(omega, Rational(1)));
    RingElement t = RingElement::generator(omega, "t");
    t *= Rational(2, 3);
    p.add_canonical(T.graph, t);
    std::string js = graphvector_to_json(p);
    GraphVector back = graphvector_from_json(js, amb, omega);
    CHECK(back == p);
}

TEST_CASE("deterministic reports") {
    Ambient amb{build_builtin("sphere:3"), 6};
    ComplexWindow win = enumerate_basis(amb, {-1, 1});
    auto mats = differential_matrices(win);
    std::map<int, HomologyResult> hom;
    hom[0] = homology_at(win, 0, mats);
    std::string a = window_report(win, hom, "sphere:3");
    std::string b = window_report(win, hom, "sphere:3");
    CHECK(a == b);
    CHECK(a.find("homologyRank") != std::string::npos);
}

TEST_CASE("arity-2 morphism components") {
    // strict identity tables: every connecting tree evaluates to zero, so the
    // binary component vanishes (disconnected forests are filtered out)
    ModelPtr m = build_builtin("s2xs2");
    Ambient amb{m, 7};
    HomotopyMorphism id;
    id.source = m;
    id.target = m;
    for (int i = 0; i < static_cast<int>(m->size()); ++i)
        id.tables["1"][{i}] = AlgElement{{i, Rational(1)}};
    GraphVector L1 = single(amb, HairyGraph::make_segment(0, 2));
    GraphVector L2 = single(amb, HairyGraph::make_segment(1, 2));
    CHECK(apply_homotopy_morphism(id, {L1, L2}, 12).is_zero());

    // a nonzero 2-leaf table produces connected outputs of the summed degree
    ModelPtr src = build_builtin("s2xs2");
    auto tgt = std::make_shared<AlgebraModel>();
    tgt->name = "utarget";
    tgt->basis = {{"u1", 2}, {"u2", 2}, {"v", 3}};
    HomotopyMorphism psi;
    psi.source = src;
    psi.target = tgt;
    psi.tables["1"][{0}] = AlgElement{{0, Rational(1)}};
    psi.tables["1"][{1}] = AlgElement{{1, Rational(1)}};
    psi.tables["(1,2)"][{0, 1}] = AlgElement{{2, Rational(1)}};
    psi.tables["(1,2)"][{1, 0}] = AlgElement{{2, Rational(1)}};

    Ambient samb{src, 7};
    HairyGraph t1g;
    t1g.vertices = 1;
    t1g.hairs = {{0, 0}, {0, 0}, {0, 1}};
    HairyGraph t2g;
    t2g.vertices = 1;
    t2g.hairs = {{0, 1}, {0, 1}, {0, 0}};
    GraphVector T1 = single(samb, t1g), T2 = single(samb, t2g);
    REQUIRE(!T1.is_zero());
    REQUIRE(!T2.is_zero());
    GraphVector out = apply_homotopy_morphism(psi, {T1, T2}, 20);
    REQUIRE(!out.is_zero());
    int din = degree(t1g, samb) + degree(t2g, samb);
    Ambient tamb{tgt, 7};
    for (auto& [g, c] : out.terms()) {
        CHECK(degree(g, tamb) == din);
        CHECK(is_valid(g, *tgt).ok);
    }
}

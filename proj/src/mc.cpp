#include "hgcalc/mc.hpp"

#include <algorithm>

namespace hgcalc {

std::vector<HairyGraph> degree_zero_tree_basis(const Ambient& amb) {
    // Delta >= 0 enforced by complete_edge_bound; with it, every genus >= 1
    // graph has strictly positive degree, so the degree-0 basis consists of
    // trees.
    WindowOptions opt;
    opt.d_min = 0;
    opt.d_max = 0;
    ComplexWindow win = enumerate_basis(amb, opt);
    for (auto& g : win.basis_at(0))
        if (g.genus() != 0)
            throw std::logic_error("degree_zero_tree_basis: genus >= 1 graph of degree 0");
    return win.basis_at(0);
}

GraphVector generic_mc_candidate(const Ambient& amb, const std::vector<HairyGraph>& basis,
                                 RingPtr* ring_out) {
    std::vector<RingGenerator> gens;
    for (std::size_t i = 0; i < basis.size(); ++i)
        gens.push_back({"λ" + std::to_string(i + 1), 0, -1, {}});
    RingPtr ring = CoefficientRing::make(std::move(gens), 8);
    if (ring_out) *ring_out = ring;
    GraphVector c(amb, ring);
    for (std::size_t i = 0; i < basis.size(); ++i)
        c.add_canonical(basis[i],
                        RingElement::generator(ring, "λ" + std::to_string(i + 1)));
    return c;
}

std::vector<Obstruction> mc_obstruction_system(const GraphVector& candidate, int k_max) {
    const Ambient& amb = candidate.ambient();
    int cap = complete_edge_bound(amb, 0) + 2;
    CurvatureOptions opt;
    opt.k_max = k_max;
    opt.edge_cap = cap;
    opt.include_ring_differential = false;
    GraphVector cur = curvature(candidate, opt);
    std::vector<Obstruction> out;
    for (auto& [g, poly] : cur.terms()) {
        if (degree(g, amb) != -1 || g.genus() != 0)
            throw std::logic_error(
                "mc_obstruction_system: obstruction term outside the degree -1 tree space");
        out.push_back({g, poly});
    }
    return out;
}

bool verify_mc(const GraphVector& m) {
    const Ambient& amb = m.ambient();
    if (!m.is_homogeneous_of_degree(0))
        throw std::invalid_argument("verify_mc: element must have degree 0");
    int cap = complete_edge_bound(amb, 0) + 2;  // throws when Delta < 0 (uncertified)
    CurvatureOptions opt;
    opt.k_max = cap + 2;
    opt.edge_cap = cap;
    opt.include_ring_differential = false;
    return curvature(m, opt).is_zero();
}

namespace {

GraphVector evaluate_endpoint(const GraphVector& p, const Rational& t_value) {
    RingPtr Q = CoefficientRing::rationals();
    GraphVector out(p.ambient(), Q);
    std::map<std::string, Rational> vals{{"t", t_value}, {"dt", Rational(0)}};
    for (auto& [g, c] : p.terms()) {
        Rational v = c.evaluate(vals);
        if (!v.is_zero()) out.add_canonical(g, RingElement::constant(Q, v));
    }
    return out;
}

}  // namespace

GaugeCheck gauge_path_check(const GraphVector& p) {
    const Ambient& amb = p.ambient();
    if (!p.is_homogeneous_of_degree(0))
        throw std::invalid_argument("gauge_path_check: path must have total degree 0");
    int cap = complete_edge_bound(amb, 0) + 2;
    CurvatureOptions opt;
    opt.k_max = cap + 2;
    opt.edge_cap = cap;
    opt.include_ring_differential = true;
    GraphVector cur = curvature(p, opt);
    GaugeCheck res;
    res.ok = cur.is_zero();
    res.endpoint0 = evaluate_endpoint(p, Rational(0));
    res.endpoint1 = evaluate_endpoint(p, Rational(1));
    return res;
}

std::optional<GraphVector> gauge_path_search(const GraphVector& m0, const GraphVector& m1,
                                             int t_degree) {
    const Ambient& amb = m0.ambient();
    RingPtr omega = CoefficientRing::interval_forms(std::max(8, 4 * (t_degree + 2)));
    RingElement t = RingElement::generator(omega, "t");
    RingElement dt = RingElement::generator(omega, "dt");
    RingElement one = RingElement::constant(omega, Rational(1));

    // linear interpolation in t
    GraphVector line(amb, omega);
    for (auto& [g, c] : m0.terms()) {
        Rational r(0);
        for (auto& [mono, coef] : c.terms()) r += coef;
        RingElement cc = one;
        cc *= r;
        line.add_canonical(g, cc);
    }
    for (auto& [g, c] : m1.terms()) {
        Rational r(0);
        for (auto& [mono, coef] : c.terms()) r += coef;
        RingElement cc = t;
        cc *= r;
        line.add_canonical(g, cc);
    }
    for (auto& [g, c] : m0.terms()) {
        Rational r(0);
        for (auto& [mono, coef] : c.terms()) r += coef;
        RingElement cc = t;
        cc *= -r;
        line.add_canonical(g, cc);
    }

    int cap = complete_edge_bound(amb, 0) + 2;
    CurvatureOptions copt;
    copt.k_max = cap + 2;
    copt.edge_cap = cap;
    copt.include_ring_differential = true;
    GraphVector base_cur = curvature(line, copt);

    // the t-part (monomials without dt) must vanish on its own
    int dt_idx = omega->index_of("dt");
    for (auto& [g, c] : base_cur.terms())
        for (auto& [mono, coef] : c.terms())
            if (mono[dt_idx] == 0) return std::nullopt;

    // unknowns: dt * t^j * b over the degree-1 tree basis
    WindowOptions wopt;
    wopt.d_min = 1;
    wopt.d_max = 1;
    wopt.trees_only = true;
    ComplexWindow win1 = enumerate_basis(amb, wopt);
    const auto& b1 = win1.basis_at(1);
    if (b1.empty())
        return base_cur.is_zero() ? std::optional<GraphVector>(line) : std::nullopt;

    struct Unknown {
        int j;
        const HairyGraph* g;
        GraphVector effect;  // curvature(line + dt t^j g) - curvature(line)
    };
    std::vector<Unknown> unknowns;
    for (int j = 0; j <= t_degree; ++j) {
        for (auto& g : b1) {
            GraphVector probe = line;
            RingElement cj = dt;
            for (int q = 0; q < j; ++q) cj = cj * t;
            probe.add_canonical(g, cj);
            GraphVector cur = curvature(probe, copt);
            cur -= base_cur;
            unknowns.push_back({j, &g, std::move(cur)});
        }
    }

    // linear system over the (graph, monomial) coordinates
    std::map<std::pair<HairyGraph, Monomial>, int> coord;
    auto coord_of = [&](const HairyGraph& g, const Monomial& m) {
        auto key = std::make_pair(g, m);
        auto it = coord.find(key);
        if (it == coord.end()) it = coord.emplace(key, static_cast<int>(coord.size())).first;
        return it->second;
    };
    std::vector<std::map<int, Rational>> cols(unknowns.size());
    std::map<int, Rational> rhs;
    for (std::size_t u = 0; u < unknowns.size(); ++u)
        for (auto& [g, c] : unknowns[u].effect.terms())
            for (auto& [mono, coef] : c.terms()) cols[u][coord_of(g, mono)] = coef;
    for (auto& [g, c] : base_cur.terms())
        for (auto& [mono, coef] : c.terms()) rhs[coord_of(g, mono)] = -coef;

    SparseMatrix M(static_cast<int>(coord.size()), static_cast<int>(unknowns.size()));
    for (std::size_t u = 0; u < unknowns.size(); ++u)
        for (auto& [r, v] : cols[u]) M.add(r, static_cast<int>(u), v);
    std::vector<Rational> b(coord.size(), Rational(0));
    for (auto& [r, v] : rhs) b[r] = v;

    auto sol = solve_exact(M, b);
    if (!sol) return std::nullopt;

    GraphVector path = line;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        if ((*sol)[u].is_zero()) continue;
        RingElement cj = dt;
        for (int q = 0; q < unknowns[u].j; ++q) cj = cj * t;
        cj *= (*sol)[u];
        path.add_canonical(*unknowns[u].g, cj);
    }
    // confirm
    if (!curvature(path, copt).is_zero()) return std::nullopt;
    return path;
}

UTTContext utt_context(const Ambient& amb, int deg) {
    UTTContext ctx;
    ctx.amb = amb;
    ctx.degree = deg;

    WindowOptions wopt;
    wopt.d_min = deg;
    wopt.d_max = deg;
    wopt.trees_only = true;
    ComplexWindow win = enumerate_basis(amb, wopt);
    for (auto& g : win.basis_at(deg)) {
        bool ut = true;
        if (!g.is_segment()) {
            std::vector<int> val(g.vertices, 0);
            for (auto& [u, v] : g.edges) {
                val[u]++;
                val[v]++;
            }
            for (auto& [v, d] : g.hairs) val[v]++;
            for (int v = 0; v < g.vertices; ++v)
                if (val[v] != 3) ut = false;
        }
        if (ut) ctx.ut_basis.push_back(g);
    }

    // IHX generators: delta_split of trees of degree deg+1 with exactly one
    // 4-valent vertex
    WindowOptions sopt;
    sopt.d_min = deg + 1;
    sopt.d_max = deg + 1;
    sopt.trees_only = true;
    ComplexWindow src = enumerate_basis(amb, sopt);
    RingPtr Q = CoefficientRing::rationals();
    std::vector<std::vector<Rational>> rows;
    for (auto& g : src.basis_at(deg + 1)) {
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
            if (val[v] == 4)
                ++fours;
            else if (val[v] != 3)
                ok = false;
        }
        if (!ok || fours != 1) continue;
        GraphVector gv(amb, Q);
        gv.add_canonical(g, RingElement::constant(Q, Rational(1)));
        GraphVector img = delta_split(gv);
        std::vector<Rational> row(ctx.ut_basis.size(), Rational(0));
        bool in_span = true;
        for (auto& [h, c] : img.terms()) {
            auto it = std::lower_bound(ctx.ut_basis.begin(), ctx.ut_basis.end(), h);
            if (it == ctx.ut_basis.end() || !(*it == h)) {
                in_span = false;
                break;
            }
            Rational r(0);
            for (auto& [mono, coef] : c.terms()) r += coef;
            row[it - ctx.ut_basis.begin()] = r;
        }
        if (in_span) rows.push_back(std::move(row));
    }
    SparseMatrix M(static_cast<int>(rows.size()), static_cast<int>(ctx.ut_basis.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            if (!rows[r][c].is_zero()) M.add(static_cast<int>(r), static_cast<int>(c), rows[r][c]);
    ctx.ihx = echelon_form(M);
    std::vector<bool> pivot(ctx.ut_basis.size(), false);
    for (int c : ctx.ihx.pivot_cols) pivot[c] = true;
    for (std::size_t c = 0; c < ctx.ut_basis.size(); ++c)
        if (!pivot[c]) ctx.retained.push_back(static_cast<int>(c));
    return ctx;
}

bool UTTElement::is_zero() const {
    return std::all_of(coords.begin(), coords.end(),
                       [](const Rational& r) { return r.is_zero(); });
}

UTTElement utt_project(const UTTContext& ctx, const GraphVector& v) {
    std::vector<Rational> raw(ctx.ut_basis.size(), Rational(0));
    for (auto& [g, c] : v.terms()) {
        if (degree(g, ctx.amb) != ctx.degree) continue;
        auto it = std::lower_bound(ctx.ut_basis.begin(), ctx.ut_basis.end(), g);
        if (it == ctx.ut_basis.end() || !(*it == g)) continue;  // non-UT graphs die
        Rational r(0);
        for (auto& [mono, coef] : c.terms()) r += coef;
        raw[it - ctx.ut_basis.begin()] += r;
    }
    UTTElement e;
    e.ctx = &ctx;
    e.coords = ctx.ihx.reduce(std::move(raw));
    return e;
}

UTTH0 utt_h0(const Ambient& amb) {
    UTTContext c1 = utt_context(amb, 1);
    UTTContext c0 = utt_context(amb, 0);
    UTTContext cm1 = utt_context(amb, -1);
    RingPtr Q = CoefficientRing::rationals();
    int cap = complete_edge_bound(amb, 1) + 2;

    auto matrix = [&](const UTTContext& from, const UTTContext& to) {
        SparseMatrix m(static_cast<int>(to.retained.size()),
                       static_cast<int>(from.retained.size()));
        for (std::size_t j = 0; j < from.retained.size(); ++j) {
            GraphVector gv(amb, Q);
            gv.add_canonical(from.ut_basis[from.retained[j]],
                             RingElement::constant(Q, Rational(1)));
            UTTElement img = utt_project(to, differential(gv, cap));
            for (std::size_t r = 0; r < to.retained.size(); ++r) {
                const Rational& val = img.coords[to.retained[r]];
                if (!val.is_zero()) m.add(static_cast<int>(r), static_cast<int>(j), val);
            }
        }
        return m;
    };
    SparseMatrix d0 = matrix(c0, cm1);
    SparseMatrix d1 = matrix(c1, c0);

    UTTH0 res;
    res.rank = homology_rank(d1, d0);
    auto kernel = kernel_basis(d0);
    // reduce modulo im(d1)
    SparseMatrix image_rows(d1.cols(), d1.rows());
    for (auto& [rc, v] : d1.entries()) image_rows.add(rc.second, rc.first, v);
    Echelon ech = echelon_form(image_rows);
    for (auto& v : kernel) {
        if (static_cast<int>(res.basis.size()) >= res.rank) break;
        auto r = ech.reduce(v);
        if (std::all_of(r.begin(), r.end(), [](const Rational& x) { return x.is_zero(); }))
            continue;
        GraphVector rep(amb, Q);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero())
                rep.add_canonical(c0.ut_basis[c0.retained[i]], RingElement::constant(Q, v[i]));
        res.basis.push_back(std::move(rep));
    }
    return res;
}

}  // namespace hgcalc

#include "hgcalc/algebra.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

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

int koszul_sign_perm(const std::vector<int>& positions, const std::vector<bool>& odd) {
    // parity of inversions among odd entries
    int s = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!odd[i]) continue;
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (odd[j] && positions[i] > positions[j]) ++s;
    }
    return (s & 1) ? -1 : 1;
}

}  // namespace

int AlgebraModel::dimension() const {
    int d = 0;
    for (auto& b : basis) d = std::max(d, b.degree);
    return d;
}

int AlgebraModel::min_degree() const {
    int d = basis.empty() ? 0 : basis[0].degree;
    for (auto& b : basis) d = std::min(d, b.degree);
    return d;
}

int AlgebraModel::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].id == id) return static_cast<int>(i);
    throw std::invalid_argument("algebra '" + name + "': unknown basis id '" + id + "'");
}

AlgElement AlgebraModel::multiply_basis(int i, int j) const {
    auto it = product.find({i, j});
    return it == product.end() ? AlgElement{} : it->second;
}

AlgElement AlgebraModel::differential_of(int i) const {
    auto it = differential.find(i);
    return it == differential.end() ? AlgElement{} : it->second;
}

AlgElement AlgebraModel::multiply(const AlgElement& a, const AlgElement& b) const {
    AlgElement out;
    for (auto& [i, ci] : a)
        for (auto& [j, cj] : b) add_scaled(out, multiply_basis(i, j), ci * cj);
    return out;
}

AlgElement AlgebraModel::rho(const RootedTree& t, const std::vector<int>& args) const {
    if (static_cast<int>(args.size()) != t.leaf_count())
        throw std::invalid_argument("rho: arity mismatch");
    if (t.is_leaf()) return {};  // rho on the trivial tree is zero

    if (!has_homotopy()) {
        if (t.vertex_count() > 1) return {};
        AlgElement acc{{args[0], Rational(1)}};
        for (std::size_t k = 1; k < args.size(); ++k)
            acc = multiply(acc, AlgElement{{args[k], Rational(1)}});
        return acc;
    }

    ShapeForm sf = shape_canonical(t);
    // permute the arguments into the canonical leaf order, with Koszul sign
    std::vector<int> ordered(args.size());
    std::vector<int> positions(args.size());
    std::vector<bool> odd(args.size());
    for (std::size_t k = 0; k < args.size(); ++k) {
        int src = sf.leaf_sources[k];  // original leaf label at slot k+1
        ordered[k] = args[src - 1];
        positions[k] = src;
        odd[k] = degree_of(ordered[k]) % 2 != 0;
    }
    int sign = koszul_sign_perm(positions, odd);

    AlgElement out;
    std::string key = sf.tree.key();
    // the one-vertex tree with two leaves is the product itself
    if (key == "(1,2)") {
        out = multiply_basis(ordered[0], ordered[1]);
    } else {
        auto it = homotopy.find(key);
        if (it == homotopy.end()) return {};
        auto jt = it->second.find(ordered);
        if (jt == it->second.end()) return {};
        out = jt->second;
    }
    if (sign < 0)
        for (auto& [i, c] : out) c = -c;
    return out;
}

AlgElement AlgebraModel::rho(const RootedTree& t, const std::vector<AlgElement>& args) const {
    // multilinear expansion
    AlgElement out;
    std::vector<int> idx(args.size(), 0);
    std::vector<std::vector<std::pair<int, Rational>>> flat;
    for (auto& a : args) {
        if (a.empty()) return {};
        flat.emplace_back(a.begin(), a.end());
    }
    while (true) {
        std::vector<int> tuple;
        Rational c(1);
        for (std::size_t i = 0; i < flat.size(); ++i) {
            tuple.push_back(flat[i][idx[i]].first);
            c *= flat[i][idx[i]].second;
        }
        add_scaled(out, rho(t, tuple), c);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == flat[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// builtins

namespace {

ModelPtr finish(AlgebraModel m) { return std::make_shared<AlgebraModel>(std::move(m)); }

ModelPtr make_sphere(int deg) {
    AlgebraModel m;
    m.name = "sphere:" + std::to_string(deg);
    m.basis = {{"w", deg}};
    // w^2 = 0 in the truncated ring, for either parity
    return finish(std::move(m));
}

ModelPtr make_wedge(const std::vector<int>& degs) {
    AlgebraModel m;
    m.name = "wedge:";
    for (std::size_t i = 0; i < degs.size(); ++i) {
        m.name += (i ? "," : "") + std::to_string(degs[i]);
        m.basis.push_back({"w" + std::to_string(i + 1), degs[i]});
    }
    return finish(std::move(m));
}

ModelPtr make_disjoint(const std::vector<int>& degs) {
    AlgebraModel m;
    m.name = "disjoint:";
    int r = static_cast<int>(degs.size());
    for (int i = 0; i < r; ++i) {
        m.name += (i ? "," : "") + std::to_string(degs[i]);
        m.basis.push_back({"1_" + std::to_string(i + 1), 0});
    }
    for (int i = 0; i < r; ++i) m.basis.push_back({"w" + std::to_string(i + 1), degs[i]});
    for (int i = 0; i < r; ++i) {
        // 1_i 1_i = 1_i, 1_i w_i = w_i 1_i = w_i
        m.product[{i, i}] = {{i, Rational(1)}};
        m.product[{i, r + i}] = {{r + i, Rational(1)}};
        m.product[{r + i, i}] = {{r + i, Rational(1)}};
    }
    return finish(std::move(m));
}

ModelPtr make_s1xs2() {
    AlgebraModel m;
    m.name = "s1xs2";
    m.basis = {{"a", 1}, {"b", 2}, {"ab", 3}};
    m.product[{0, 1}] = {{2, Rational(1)}};
    m.product[{1, 0}] = {{2, Rational(1)}};  // b*a = (-1)^{2*1} ab
    return finish(std::move(m));
}

ModelPtr make_s2xs2() {
    AlgebraModel m;
    m.name = "s2xs2";
    m.basis = {{"w1", 2}, {"w2", 2}, {"w1w2", 4}};
    m.product[{0, 1}] = {{2, Rational(1)}};
    m.product[{1, 0}] = {{2, Rational(1)}};
    return finish(std::move(m));
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("builtin spec: empty degree");
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::invalid_argument("builtin spec: no degrees");
    return out;
}

}  // namespace

ModelPtr build_builtin(const std::string& spec) {
    if (spec == "s1xs2") return make_s1xs2();
    if (spec == "s2xs2") return make_s2xs2();
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("builtin spec '" + spec + "' not recognized");
    std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
    if (head == "sphere") {
        int d = std::stoi(rest);
        if (d < 1) throw std::invalid_argument("sphere:m needs m >= 1");
        return make_sphere(d);
    }
    if (head == "wedge") return make_wedge(parse_int_list(rest));
    if (head == "disjoint") return make_disjoint(parse_int_list(rest));
    if (head == "product") {
        // product:sphere:m1,sphere:m2
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("product spec needs two factors");
        auto a = build_builtin(rest.substr(0, comma));
        auto b = build_builtin(rest.substr(comma + 1));
        return tensor(*a, *b);
    }
    throw std::invalid_argument("builtin spec '" + spec + "' not recognized");
}

ModelPtr tensor(const AlgebraModel& A, const AlgebraModel& B) {
    if (A.has_homotopy() || B.has_homotopy())
        throw std::invalid_argument("tensor: homotopy models are not supported");
    {
        auto va = validate(A), vb = validate(B);
        if (!va.empty() || !vb.empty())
            throw std::invalid_argument("tensor: input model fails validation");
    }
    AlgebraModel m;
    m.name = "(" + A.name + ")x(" + B.name + ")";
    int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
    // index layout: [0,na) = a (x) 1, [na, na+nb) = 1 (x) b, then a (x) b pairs
    std::vector<std::string> bids(nb);
    for (int j = 0; j < nb; ++j) {
        bids[j] = B.basis[j].id;
        for (auto& a : A.basis)
            if (a.id == bids[j]) bids[j] = B.basis[j].id + "'";
    }
    for (int i = 0; i < na; ++i) m.basis.push_back({A.basis[i].id, A.basis[i].degree});
    for (int j = 0; j < nb; ++j) m.basis.push_back({bids[j], B.basis[j].degree});
    auto pair_index = [&](int i, int j) { return na + nb + i * nb + j; };
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            m.basis.push_back(
                {A.basis[i].id + "." + bids[j], A.basis[i].degree + B.basis[j].degree});

    // embed an A-element / B-element / pure tensor into the new index space
    auto embA = [&](const AlgElement& e) {
        AlgElement out;
        for (auto& [i, c] : e) out[i] = c;
        return out;
    };
    auto embB = [&](const AlgElement& e) {
        AlgElement out;
        for (auto& [j, c] : e) out[na + j] = c;
        return out;
    };
    auto embAB = [&](const AlgElement& ea, const AlgElement& eb) {
        AlgElement out;
        for (auto& [i, ci] : ea)
            for (auto& [j, cj] : eb) {
                Rational c = ci * cj;
                if (!c.is_zero()) out[pair_index(i, j)] = c;
            }
        return out;
    };

    auto setp = [&](int i, int j, AlgElement e) {
        if (!e.empty()) m.product[{i, j}] = std::move(e);
    };

    for (int i = 0; i < na; ++i)
        for (int i2 = 0; i2 < na; ++i2) setp(i, i2, embA(A.multiply_basis(i, i2)));
    for (int j = 0; j < nb; ++j)
        for (int j2 = 0; j2 < nb; ++j2) setp(na + j, na + j2, embB(B.multiply_basis(j, j2)));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            // a * b = a(x)b ; b * a = (-1)^{|a||b|} a(x)b
            setp(i, na + j, AlgElement{{pair_index(i, j), Rational(1)}});
            int s = (A.basis[i].degree * B.basis[j].degree) % 2 ? -1 : 1;
            setp(na + j, i, AlgElement{{pair_index(i, j), Rational(s)}});
        }
    for (int i = 0; i < na; ++i)
        for (int i2 = 0; i2 < na; ++i2)
            for (int j2 = 0; j2 < nb; ++j2) {
                // a * (a' (x) b') = (aa') (x) b'
                setp(i, pair_index(i2, j2), embAB(A.multiply_basis(i, i2), {{j2, Rational(1)}}));
                // (a' (x) b') * a = (-1)^{|b'||a|} (a'a) (x) b'
                int s = (B.basis[j2].degree * A.basis[i].degree) % 2 ? -1 : 1;
                AlgElement e = embAB(A.multiply_basis(i2, i), {{j2, Rational(1)}});
                if (s < 0)
                    for (auto& [k, c] : e) c = -c;
                setp(pair_index(i2, j2), i, std::move(e));
            }
    for (int j = 0; j < nb; ++j)
        for (int i2 = 0; i2 < na; ++i2)
            for (int j2 = 0; j2 < nb; ++j2) {
                // b * (a' (x) b') = (-1)^{|b||a'|} a' (x) (bb')
                int s = (B.basis[j].degree * A.basis[i2].degree) % 2 ? -1 : 1;
                AlgElement e = embAB({{i2, Rational(1)}}, B.multiply_basis(j, j2));
                if (s < 0)
                    for (auto& [k, c] : e) c = -c;
                setp(na + j, pair_index(i2, j2), std::move(e));
                // (a' (x) b') * b = a' (x) (b'b)
                setp(pair_index(i2, j2), na + j, embAB({{i2, Rational(1)}}, B.multiply_basis(j2, j)));
            }
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int i2 = 0; i2 < na; ++i2)
                for (int j2 = 0; j2 < nb; ++j2) {
                    // (a(x)b)(a'(x)b') = (-1)^{|b||a'|} (aa') (x) (bb')
                    int s = (B.basis[j].degree * A.basis[i2].degree) % 2 ? -1 : 1;
                    AlgElement e = embAB(A.multiply_basis(i, i2), B.multiply_basis(j, j2));
                    if (s < 0)
                        for (auto& [k, c] : e) c = -c;
                    setp(pair_index(i, j), pair_index(i2, j2), std::move(e));
                }

    // differential: d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db
    auto setd = [&](int i, AlgElement e) {
        if (!e.empty()) m.differential[i] = std::move(e);
    };
    for (int i = 0; i < na; ++i) setd(i, embA(A.differential_of(i)));
    for (int j = 0; j < nb; ++j) setd(na + j, embB(B.differential_of(j)));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            AlgElement e = embAB(A.differential_of(i), {{j, Rational(1)}});
            AlgElement e2 = embAB({{i, Rational(1)}}, B.differential_of(j));
            int s = A.basis[i].degree % 2 ? -1 : 1;
            for (auto& [k, c] : e2) add_scaled(e, AlgElement{{k, c}}, Rational(s));
            setd(pair_index(i, j), std::move(e));
        }
    return finish(std::move(m));
}

// ---------------------------------------------------------------------------
// validation

namespace {

std::string elem_str(const AlgebraModel& m, const AlgElement& e) {
    if (e.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [i, c] : e) {
        if (!first) os << " + ";
        first = false;
        os << c.str() << "*" << m.basis[i].id;
    }
    return os.str();
}

bool elem_eq(const AlgElement& a, const AlgElement& b) { return a == b; }

AlgElement scaled(AlgElement e, int s) {
    if (s < 0)
        for (auto& [i, c] : e) c = -c;
    return e;
}

}  // namespace

std::vector<ValidationIssue> validate(const AlgebraModel& m, int tree_bound) {
    std::vector<ValidationIssue> issues;
    auto flag = [&](const std::string& rule, const std::string& detail) {
        issues.push_back({rule, detail});
    };

    int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i) {
        if (m.basis[i].degree < 0) flag("degree", "basis '" + m.basis[i].id + "' has negative degree");
        for (int j = i + 1; j < n; ++j)
            if (m.basis[i].id == m.basis[j].id)
                flag("basis", "duplicate id '" + m.basis[i].id + "'");
    }

    // degree-0 elements must be orthogonal idempotents
    for (int i = 0; i < n; ++i) {
        if (m.basis[i].degree != 0) continue;
        if (!elem_eq(m.multiply_basis(i, i), AlgElement{{i, Rational(1)}}))
            flag("degree-zero", "'" + m.basis[i].id + "' is not idempotent");
        for (int j = 0; j < n; ++j) {
            if (j == i || m.basis[j].degree != 0) continue;
            if (!m.multiply_basis(i, j).empty())
                flag("degree-zero", "'" + m.basis[i].id + "'*'" + m.basis[j].id + "' != 0");
        }
    }

    // homogeneity of the tables
    for (auto& [ij, e] : m.product) {
        int want = m.basis[ij.first].degree + m.basis[ij.second].degree;
        for (auto& [k, c] : e)
            if (m.basis[k].degree != want)
                flag("homogeneity", "product " + m.basis[ij.first].id + "*" +
                                        m.basis[ij.second].id + " has degree-" +
                                        std::to_string(m.basis[k].degree) + " term");
    }
    for (auto& [i, e] : m.differential)
        for (auto& [k, c] : e)
            if (m.basis[k].degree != m.basis[i].degree + 1)
                flag("homogeneity", "d(" + m.basis[i].id + ") not of degree +1");

    // graded commutativity
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int s = (m.basis[i].degree * m.basis[j].degree) % 2 ? -1 : 1;
            if (!elem_eq(m.multiply_basis(i, j), scaled(m.multiply_basis(j, i), s)))
                flag("commutativity", m.basis[i].id + "*" + m.basis[j].id + " != +/- " +
                                          m.basis[j].id + "*" + m.basis[i].id);
        }

    // associativity
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                AlgElement l = m.multiply(m.multiply_basis(i, j), AlgElement{{k, Rational(1)}});
                AlgElement r = m.multiply(AlgElement{{i, Rational(1)}}, m.multiply_basis(j, k));
                if (!elem_eq(l, r))
                    flag("associativity", "(" + m.basis[i].id + "*" + m.basis[j].id + ")*" +
                                              m.basis[k].id + " != " + m.basis[i].id + "*(" +
                                              m.basis[j].id + "*" + m.basis[k].id + ")");
            }

    // d^2 = 0
    for (int i = 0; i < n; ++i) {
        AlgElement dd;
        for (auto& [k, c] : m.differential_of(i)) add_scaled(dd, m.differential_of(k), c);
        if (!dd.empty()) flag("d2", "d(d(" + m.basis[i].id + ")) = " + elem_str(m, dd));
    }

    // Leibniz: d(ab) = (da)b + (-1)^{|a|} a(db)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            AlgElement lhs;
            for (auto& [k, c] : m.multiply_basis(i, j)) add_scaled(lhs, m.differential_of(k), c);
            AlgElement rhs = m.multiply(m.differential_of(i), AlgElement{{j, Rational(1)}});
            AlgElement second = m.multiply(AlgElement{{i, Rational(1)}}, m.differential_of(j));
            add_scaled(rhs, second, Rational(m.basis[i].degree % 2 ? -1 : 1));
            if (!elem_eq(lhs, rhs))
                flag("leibniz", "d(" + m.basis[i].id + "*" + m.basis[j].id + ")");
        }

    if (m.has_homotopy()) validate_homotopy(m, tree_bound, issues);

    return issues;
}

}  // namespace hgcalc

#include "hgcalc/ring.hpp"

#include <algorithm>
#include <sstream>

namespace hgcalc {

RingPtr CoefficientRing::make(std::vector<RingGenerator> gens, int truncation) {
    auto r = std::make_shared<CoefficientRing>();
    r->gens_ = std::move(gens);
    r->truncation_ = truncation;
    for (auto& g : r->gens_) {
        if (g.degree % 2 != 0) g.cap = 1;
    }
    return r;
}

RingPtr CoefficientRing::interval_forms(int t_cap) {
    RingGenerator t{"t", 0, t_cap, {}};
    RingGenerator dt{"dt", -1, 1, {}};
    // d(t) = dt
    t.differential.push_back({{0, 1}, Rational(1)});
    return make({t, dt}, t_cap + 1);
}

RingPtr CoefficientRing::extend(const RingPtr& base,
                                const std::vector<std::pair<std::string, int>>& extra) {
    std::vector<RingGenerator> gens = base->gens_;
    std::size_t old = gens.size();
    for (auto& g : gens)
        for (auto& [m, c] : g.differential) m.resize(old + extra.size(), 0);
    for (auto& [name, deg] : extra) gens.push_back(RingGenerator{name, deg, 1, {}});
    return make(std::move(gens), base->truncation_ + static_cast<int>(extra.size()));
}

int CoefficientRing::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("ring: unknown generator '" + name + "'");
}

int CoefficientRing::monomial_degree(const Monomial& m) const {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * gens_[i].degree;
    return d;
}

int CoefficientRing::monomial_parity(const Monomial& m) const {
    int p = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (gens_[i].degree % 2 != 0) p += m[i];
    return p & 1;
}

bool CoefficientRing::monomial_admissible(const Monomial& m) const {
    int total = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0) return false;
        if (gens_[i].cap >= 0 && m[i] > gens_[i].cap) return false;
        total += m[i];
    }
    return truncation_ <= 0 || total <= truncation_;
}

std::optional<std::pair<Monomial, int>> CoefficientRing::multiply(const Monomial& a,
                                                                  const Monomial& b) const {
    Monomial out(gens_.size(), 0);
    // Koszul: each odd generator of b moves left past the odd generators of a
    // with larger index.
    int swaps = 0;
    int odd_tail = 0;  // odd-degree content of a at indices > i
    for (int i = static_cast<int>(gens_.size()) - 1; i >= 0; --i) {
        bool odd = gens_[i].degree % 2 != 0;
        if (odd && b[i]) swaps += b[i] * odd_tail;
        if (odd) odd_tail += a[i];
        out[i] = a[i] + b[i];
    }
    if (!monomial_admissible(out)) return std::nullopt;
    return std::make_pair(out, (swaps & 1) ? -1 : 1);
}

std::string CoefficientRing::monomial_str(const Monomial& m) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first) os << "*";
        first = false;
        os << gens_[i].name;
        if (m[i] > 1) os << "^" << m[i];
    }
    if (first) os << "1";
    return os.str();
}

RingElement lift_to(const RingElement& e, const RingPtr& bigger) {
    RingElement out(bigger);
    for (auto& [m, c] : e.terms()) {
        Monomial mm = m;
        mm.resize(bigger->size(), 0);
        out.add_term(mm, c);
    }
    return out;
}

RingElement RingElement::constant(RingPtr ring, const Rational& c) {
    RingElement e(std::move(ring));
    if (!c.is_zero()) e.terms_[Monomial(e.ring_->size(), 0)] = c;
    return e;
}

RingElement RingElement::generator(RingPtr ring, const std::string& name) {
    RingElement e(ring);
    Monomial m(ring->size(), 0);
    m[ring->index_of(name)] = 1;
    e.terms_[m] = Rational(1);
    return e;
}

std::optional<int> RingElement::degree() const {
    std::optional<int> d;
    for (auto& [m, c] : terms_) {
        int dm = ring_->monomial_degree(m);
        if (!d)
            d = dm;
        else if (*d != dm)
            return std::nullopt;
    }
    return d;
}

void RingElement::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero() || !ring_->monomial_admissible(m)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

RingElement RingElement::operator-() const {
    RingElement out(ring_);
    for (auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
}

RingElement& RingElement::operator+=(const RingElement& o) {
    if (!ring_) ring_ = o.ring_;
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& o) {
    if (!ring_) ring_ = o.ring_;
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    if (a.ring_ != b.ring_) throw std::invalid_argument("ring: mismatched rings");
    RingElement out(a.ring_);
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_) {
            auto prod = a.ring_->multiply(ma, mb);
            if (!prod) continue;
            Rational c = ca * cb;
            if (prod->second < 0) c = -c;
            out.add_term(prod->first, c);
        }
    return out;
}

RingElement& RingElement::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

RingElement RingElement::differential() const {
    RingElement out(ring_);
    const auto& gens = ring_->generators();
    for (auto& [m, c] : terms_) {
        // d as a derivation on the canonical word g_0^{e_0} g_1^{e_1} ...:
        // hitting the letter at slot i gives (-1)^{parity(prefix)} times
        // prefix * d(g_i) * suffix, with multiplicity e_i for even g_i.
        int odd_prefix = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            bool odd = gens[i].degree % 2 != 0;
            if (m[i] && !gens[i].differential.empty()) {
                Monomial pre(m.size(), 0), suf(m.size(), 0);
                for (std::size_t j = 0; j < i; ++j) pre[j] = m[j];
                for (std::size_t j = i; j < m.size(); ++j) suf[j] = m[j];
                suf[i] -= 1;
                int sign = (odd_prefix & 1) ? -1 : 1;
                for (auto& [dm, dc] : gens[i].differential) {
                    auto inner = ring_->multiply(dm, suf);
                    if (!inner) continue;
                    auto full = ring_->multiply(pre, inner->first);
                    if (!full) continue;
                    Rational coef = c * dc * Rational(odd ? 1 : m[i]);
                    if (sign * inner->second * full->second < 0) coef = -coef;
                    out.add_term(full->first, coef);
                }
            }
            if (odd) odd_prefix += m[i];
        }
    }
    return out;
}

Rational RingElement::evaluate(const std::map<std::string, Rational>& values) const {
    std::vector<std::optional<Rational>> vals(ring_->size());
    for (auto& [name, v] : values) vals[ring_->index_of(name)] = v;
    Rational total(0);
    for (auto& [m, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!vals[i])
                throw std::invalid_argument("ring: evaluate with unbound generator '" +
                                            ring_->generators()[i].name + "'");
            for (int k = 0; k < m[i]; ++k) term *= *vals[i];
        }
        total += term;
    }
    return total;
}

RingElement RingElement::extract(const std::vector<int>& gens) const {
    RingElement out(ring_);
    const auto& G = ring_->generators();
    for (auto& [m, c] : terms_) {
        bool ok = true;
        for (int g : gens)
            if (m[g] < 1) { ok = false; break; }
        if (!ok) continue;
        // Pull the requested generators to the front of the canonical word
        // one by one (in the listed order); an odd generator moving to the
        // front of the remaining word passes the odd content to its left.
        Monomial rest = m;
        int swaps = 0;
        for (int g : gens) {
            if (G[g].degree % 2 != 0)
                for (int j = 0; j < g; ++j)
                    if (G[j].degree % 2 != 0) swaps += rest[j];
            rest[g] -= 1;
        }
        Rational coef = c;
        if (swaps & 1) coef = -coef;
        out.add_term(rest, coef);
    }
    return out;
}

std::string RingElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
        bool is_const = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
        std::string cs = c.str();
        if (!first) {
            if (cs[0] == '-') {
                os << " - ";
                cs = cs.substr(1);
            } else {
                os << " + ";
            }
        } else if (cs[0] == '-') {
            os << "-";
            cs = cs.substr(1);
        }
        first = false;
        if (is_const) {
            os << cs;
        } else if (cs == "1") {
            os << ring_->monomial_str(m);
        } else {
            os << cs << "*" << ring_->monomial_str(m);
        }
    }
    return os.str();
}

}  // namespace hgcalc

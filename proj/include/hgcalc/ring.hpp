#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgcalc/rational.hpp"

namespace hgcalc {

// A finitely generated graded-commutative parameter ring over Q.
//
// Generators carry an integer degree counted additively against the
// homological degree of the graph part (interval forms: t -> 0, dt -> -1;
// polarization variables get minus the degree of their argument).  Odd-degree
// generators square to zero; even generators may carry an explicit exponent
// cap (used for nilpotent polarization variables).  Monomials beyond the
// total-degree truncation are dropped.
struct RingGenerator {
    std::string name;
    int degree = 0;
    int cap = -1;  // -1: no cap beyond squarefreeness of odd generators
    // differential of the generator, as (monomial exponents, coefficient)
    // pairs; empty means d(gen) = 0
    std::vector<std::pair<std::vector<int>, Rational>> differential;
};

class CoefficientRing;
using RingPtr = std::shared_ptr<const CoefficientRing>;

// Monomial = exponent vector over the ring's generators.
using Monomial = std::vector<int>;

class RingElement {
public:
    RingElement() = default;
    explicit RingElement(RingPtr ring) : ring_(std::move(ring)) {}

    static RingElement zero(RingPtr ring) { return RingElement(std::move(ring)); }
    static RingElement constant(RingPtr ring, const Rational& c);
    static RingElement generator(RingPtr ring, const std::string& name);

    bool is_zero() const { return terms_.empty(); }
    const RingPtr& ring() const { return ring_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    // homogeneous degree; nullopt for 0 or mixed elements
    std::optional<int> degree() const;
    bool is_homogeneous() const { return terms_.size() <= 1 || degree().has_value(); }

    void add_term(const Monomial& m, const Rational& c);

    RingElement operator-() const;
    RingElement& operator+=(const RingElement& o);
    RingElement& operator-=(const RingElement& o);
    friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
    friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
    friend RingElement operator*(const RingElement& a, const RingElement& b);

    RingElement& operator*=(const Rational& c);
    friend RingElement operator*(const Rational& c, RingElement a) { return a *= c; }

    friend bool operator==(const RingElement& a, const RingElement& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

    // Derivation extending the generators' differentials (degree -1 in the
    // additive convention, like the rest of the complex).
    RingElement differential() const;

    // Substitute rational values for a subset of the generators (the rest
    // must not occur).  Used for gauge-path endpoints t=0,1 / dt=0.
    Rational evaluate(const std::map<std::string, Rational>& values) const;

    // Divide by the squarefree monomial given by the generator indices, in
    // the listed order; terms not divisible are discarded.  The sign is the
    // Koszul sign of extracting those generators to the front of each
    // monomial word in the listed order.
    RingElement extract(const std::vector<int>& gens) const;

    std::string str() const;

private:
    RingPtr ring_;
    std::map<Monomial, Rational> terms_;
};

// Re-express an element in an extension ring whose leading generators agree
// with the element's ring (monomials zero-padded).
RingElement lift_to(const RingElement& e, const RingPtr& bigger);

class CoefficientRing : public std::enable_shared_from_this<CoefficientRing> {
public:
    static RingPtr make(std::vector<RingGenerator> gens, int truncation = 8);

    // Plain rationals (no generators); one shared instance, since elements
    // interoperate only within the same ring object.
    static RingPtr rationals() {
        static RingPtr q = make({}, 0);
        return q;
    }

    // Q[t, dt]: t of degree 0, dt odd with d(t) = dt.  t-degree capped so the
    // polynomial algebra stays finite.
    static RingPtr interval_forms(int t_cap = 32);

    // The given ring with extra odd nilpotent polarization variables
    // appended.  Degrees are minus the degrees of the polarized arguments.
    static RingPtr extend(const RingPtr& base, const std::vector<std::pair<std::string, int>>& extra);

    std::size_t size() const { return gens_.size(); }
    const std::vector<RingGenerator>& generators() const { return gens_; }
    int truncation() const { return truncation_; }
    int index_of(const std::string& name) const;

    int monomial_degree(const Monomial& m) const;
    int monomial_parity(const Monomial& m) const;  // sum of |deg| over odd gens
    bool monomial_admissible(const Monomial& m) const;  // caps + truncation

    // product of two monomials with the Koszul sign; nullopt if it dies
    // (odd square, cap or truncation)
    std::optional<std::pair<Monomial, int>> multiply(const Monomial& a, const Monomial& b) const;

    std::string monomial_str(const Monomial& m) const;

private:
    std::vector<RingGenerator> gens_;
    int truncation_ = 8;
};

}  // namespace hgcalc

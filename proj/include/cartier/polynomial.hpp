#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cartier/ring.hpp"

namespace cartier {

struct Term {
    Exponents exp;
    Fq::Elem coeff;
};

// Sparse multivariate polynomial; terms kept sorted descending in the ring's
// monomial order, no zero coefficients stored.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(RingPtr ring);
    static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }
    static Polynomial constant(RingPtr ring, Fq::Elem c);
    static Polynomial from_int(RingPtr ring, std::int64_t n);
    static Polynomial variable(RingPtr ring, std::size_t index, std::uint32_t power = 1);
    static Polynomial monomial(RingPtr ring, Exponents exp, Fq::Elem c);

    const RingPtr& ring() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t nterms() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading_term() const; // throws on zero

    bool is_constant() const;
    Fq::Elem constant_value() const; // coefficient of x^0

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial scaled(Fq::Elem c) const;
    Polynomial times_monomial(const Exponents& exp, Fq::Elem c) const;
    Polynomial pow(std::uint64_t n) const;

    std::int64_t total_degree() const;              // -1 for zero
    std::int64_t degree_in(std::size_t var) const;  // -1 for zero

    // same variables, different order: re-sorts terms
    Polynomial to_ring(const RingPtr& other) const;

    std::string to_string() const;

    // internal: assumes terms sorted + normalized
    static Polynomial from_sorted_terms(RingPtr ring, std::vector<Term> terms);

private:
    RingPtr ring_;
    std::vector<Term> terms_;
};

// f = sum_d f_d^q x^d over digit vectors d in {0..q-1}^n; map digit -> f_d.
// Coefficients transfer unchanged because c = c^q in F_q.
struct DigitDecomposition {
    std::uint64_t q;
    std::map<Exponents, Polynomial> parts;

    Polynomial reconstruct(const RingPtr& ring) const;
};

DigitDecomposition digit_decompose(const Polynomial& f);

// Parses the session polynomial syntax: terms like `2*x^3*y + 1`, extension
// coefficients as `(t+1)*x` or bare `t`.  Throws AlgebraError with a message
// on malformed input.
Polynomial parse_polynomial(const RingPtr& ring, const std::string& text);

} // namespace cartier

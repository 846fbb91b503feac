#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cartier {

class AlgebraError : public std::runtime_error {
public:
    explicit AlgebraError(const std::string& what) : std::runtime_error(what) {}
};

// F_q = F_p[t]/(modulus), q = p^e.  Elements are packed as base-p digit
// strings: rep = sum c_i p^i with c_i the coefficient of t^i.  The packing
// doubles as a canonical enumeration index, so rep < q always.
class Fq;
using FieldPtr = std::shared_ptr<const Fq>;

class Fq {
public:
    using Elem = std::uint64_t;

    // Default modulus: first monic irreducible of degree e in the ascending
    // base-p enumeration of the lower coefficients.
    static FieldPtr make(std::uint64_t p, unsigned e);
    static FieldPtr make(std::uint64_t p, unsigned e, std::vector<std::uint64_t> modulus);

    std::uint64_t p() const { return p_; }
    unsigned e() const { return e_; }
    std::uint64_t q() const { return q_; }
    // modulus coefficients c_0..c_e, monic (c_e = 1)
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem from_int(std::int64_t n) const;
    // enumeration: every element equals element_at(i) for exactly one i < q
    Elem element_at(std::uint64_t index) const { return index; }

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const; // throws "division by zero" on 0
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t n) const;

    // true when the element lies in the prime subfield F_p
    bool in_prime_field(Elem a) const { return a < p_; }

    // printed as a polynomial in t ("t^2+2*t+1"); prime-subfield elements as integers
    std::string to_string(Elem a) const;

    bool same_field(const Fq& other) const;

    static std::vector<std::uint64_t> default_modulus(std::uint64_t p, unsigned e);

private:
    Fq(std::uint64_t p, unsigned e, std::vector<std::uint64_t> modulus);

    void decode(Elem a, std::uint64_t* digits) const;
    Elem encode(const std::uint64_t* digits) const;

    std::uint64_t p_;
    unsigned e_;
    std::uint64_t q_;
    std::vector<std::uint64_t> modulus_;
    // red_[k] = coefficients of t^{e+k} mod modulus, k = 0..e-2
    std::vector<std::vector<std::uint64_t>> red_;
};

bool is_prime_u64(std::uint64_t n);

} // namespace cartier

#pragma once

#include <optional>
#include <vector>

#include "cartier/polynomial.hpp"

namespace cartier {

// Element of a free module R^rank.  rank 0 is the zero module.
using PolyVec = std::vector<Polynomial>;

PolyVec zero_vec(const RingPtr& ring, std::size_t rank);
PolyVec unit_vec(const RingPtr& ring, std::size_t rank, std::size_t comp);
bool vec_is_zero(const PolyVec& v);
PolyVec vec_add(const PolyVec& a, const PolyVec& b);
PolyVec vec_sub(const PolyVec& a, const PolyVec& b);
PolyVec vec_neg(const PolyVec& a);
PolyVec vec_scale(const PolyVec& a, const Polynomial& f);
PolyVec vec_times_monomial(const PolyVec& a, const Exponents& exp, Fq::Elem c);
bool vec_equal(const PolyVec& a, const PolyVec& b);
std::string vec_to_string(const PolyVec& v);

struct VecTerm {
    std::size_t comp;
    Exponents exp;
    Fq::Elem coeff;
};

// Position-over-term with lower component index preferred: any term in
// component i beats every term in component j > i.
std::optional<VecTerm> leading_vec_term(const PolyVec& v);

bool exp_divides(const Exponents& a, const Exponents& b); // a | b componentwise
Exponents exp_sub(const Exponents& a, const Exponents& b);
Exponents exp_lcm(const Exponents& a, const Exponents& b);

// Reduced Groebner basis of the submodule of R^rank generated by `gens`,
// under position-over-term extending the ring's monomial order.  With tag
// tracking, also carries the augmented basis used for syzygies and for
// expressing members as combinations of the original generators.
class SubmoduleGB {
public:
    enum class Track { None, Tags };

    SubmoduleGB(RingPtr ring, std::size_t rank, std::vector<PolyVec> gens,
                Track track = Track::None);

    const RingPtr& ring() const { return ring_; }
    std::size_t rank() const { return rank_; }
    std::size_t ngens() const { return ngens_; }

    // canonical reduced basis, sorted descending by leading term
    const std::vector<PolyVec>& basis() const { return gb_; }

    PolyVec reduce(const PolyVec& v) const; // unique normal form
    bool contains(const PolyVec& v) const;
    bool is_zero_submodule() const { return gb_.empty(); }
    bool same_submodule(const SubmoduleGB& other) const;

    // Track::Tags only.
    // Reduced basis of the syzygy module of the original generators, as
    // vectors of length ngens.
    const std::vector<PolyVec>& syzygies() const;
    // coefficients c with v = sum c_i gens_i, when v lies in the submodule
    std::optional<std::vector<Polynomial>> lift(const PolyVec& v) const;

private:
    RingPtr ring_;
    std::size_t rank_;
    std::size_t ngens_;
    Track track_;
    std::vector<PolyVec> gb_;
    std::vector<PolyVec> aug_gb_;
    std::vector<PolyVec> syz_;
};

// Buchberger over a free module; returns the canonical reduced basis.
std::vector<PolyVec> reduced_groebner(const RingPtr& ring, std::size_t rank,
                                      std::vector<PolyVec> gens);

PolyVec normal_form(const RingPtr& ring, PolyVec v, const std::vector<PolyVec>& basis);

} // namespace cartier

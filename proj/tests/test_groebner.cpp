#include <doctest.h>

#include <random>

#include "cartier/submodule.hpp"

using namespace cartier;

namespace {

RingPtr make_ring(std::uint64_t p, std::vector<std::string> vars) {
    return Ring::make(Fq::make(p, 1), std::move(vars));
}

std::vector<PolyVec> ideal_gens(const RingPtr& R, std::initializer_list<const char*> polys) {
    std::vector<PolyVec> out;
    for (const char* s : polys) out.push_back({parse_polynomial(R, s)});
    return out;
}

// the Buchberger criterion, checked independently of the engine internals:
// every S-vector of the basis must reduce to zero against it
bool buchberger_criterion(const RingPtr& R, const std::vector<PolyVec>& basis) {
    const Fq& F = R->fq();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            auto li = leading_vec_term(basis[i]);
            auto lj = leading_vec_term(basis[j]);
            if (li->comp != lj->comp) continue;
            Exponents gamma = exp_lcm(li->exp, lj->exp);
            PolyVec s = vec_times_monomial(basis[i], exp_sub(gamma, li->exp), F.inv(li->coeff));
            PolyVec t = vec_times_monomial(basis[j], exp_sub(gamma, lj->exp), F.inv(lj->coeff));
            if (!vec_is_zero(normal_form(R, vec_sub(s, t), basis))) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("ideal <x^2 - y, y^2> over F_3: x^4 is a member") {
    auto R = make_ring(3, {"x", "y"});
    SubmoduleGB gb(R, 1, ideal_gens(R, {"x^2 - y", "y^2"}));
    CHECK(gb.contains({parse_polynomial(R, "x^4")}));
    CHECK(!gb.contains({parse_polynomial(R, "x^2")}));
    CHECK(buchberger_criterion(R, gb.basis()));
}

TEST_CASE("ideal <x>: normal form of x^2 + 1 is 1") {
    auto R = make_ring(3, {"x"});
    SubmoduleGB gb(R, 1, ideal_gens(R, {"x"}));
    PolyVec nf = gb.reduce({parse_polynomial(R, "x^2 + 1")});
    CHECK(nf[0] == Polynomial::constant(R, 1));
}

TEST_CASE("empty generator list: membership means zero") {
    auto R = make_ring(3, {"x"});
    SubmoduleGB gb(R, 1, {});
    CHECK(gb.basis().empty());
    CHECK(gb.contains({Polynomial::zero(R)}));
    CHECK(!gb.contains({parse_polynomial(R, "x")}));
}

TEST_CASE("groebner idempotence and generator membership") {
    auto R = make_ring(2, {"x", "y", "z"});
    std::vector<PolyVec> gens = ideal_gens(R, {"x*y + z", "y*z + x", "x^2 + y^2"});
    SubmoduleGB gb(R, 1, gens);
    // recomputing from the basis reproduces the basis
    SubmoduleGB gb2(R, 1, gb.basis());
    CHECK(gb.same_submodule(gb2));
    // every original generator reduces to zero
    for (const auto& g : gens) CHECK(gb.contains(g));
    CHECK(buchberger_criterion(R, gb.basis()));
}

TEST_CASE("module Groebner bases over F_3[x,y], rank 2") {
    auto R = make_ring(3, {"x", "y"});
    Polynomial x = parse_polynomial(R, "x"), y = parse_polynomial(R, "y");
    std::vector<PolyVec> gens = {
        {x * x, y},
        {y * y, x},
        {Polynomial::zero(R), x * y - y},
    };
    SubmoduleGB gb(R, 2, gens, SubmoduleGB::Track::Tags);
    CHECK(buchberger_criterion(R, gb.basis()));
    for (const auto& g : gens) CHECK(gb.contains(g));

    // lift: members decompose over the generators
    PolyVec v = vec_add(vec_scale(gens[0], x), vec_scale(gens[2], y));
    auto coeffs = gb.lift(v);
    REQUIRE(coeffs.has_value());
    PolyVec rebuilt = zero_vec(R, 2);
    for (std::size_t i = 0; i < gens.size(); ++i)
        rebuilt = vec_add(rebuilt, vec_scale(gens[i], (*coeffs)[i]));
    CHECK(vec_equal(rebuilt, v));

    // non-member
    CHECK(!gb.lift(unit_vec(R, 2, 0)).has_value());
}

TEST_CASE("syzygies annihilate the generators") {
    auto R = make_ring(3, {"x", "y"});
    std::vector<PolyVec> gens = ideal_gens(R, {"x^2", "x*y", "y^3"});
    SubmoduleGB gb(R, 1, gens, SubmoduleGB::Track::Tags);
    CHECK(!gb.syzygies().empty());
    for (const auto& syz : gb.syzygies()) {
        PolyVec combo = zero_vec(R, 1);
        for (std::size_t i = 0; i < gens.size(); ++i)
            combo = vec_add(combo, vec_scale(gens[i], syz[i]));
        CHECK(vec_is_zero(combo));
    }
}

TEST_CASE("normal forms are unique representatives") {
    auto R = make_ring(3, {"x", "y"});
    SubmoduleGB gb(R, 1, ideal_gens(R, {"x^2 - y", "y^2"}));
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Polynomial f = Polynomial::zero(R);
        for (int i = 0; i < 4; ++i) {
            Exponents e{static_cast<std::uint32_t>(rng() % 6),
                        static_cast<std::uint32_t>(rng() % 6)};
            f = f + Polynomial::monomial(R, std::move(e), R->fq().element_at(rng() % 3));
        }
        Polynomial g = f + parse_polynomial(R, "x^2 - y") *
                               Polynomial::monomial(R, {static_cast<std::uint32_t>(rng() % 3), 0}, 1);
        CHECK(gb.reduce({f})[0] == gb.reduce({g})[0]);
    }
}

TEST_CASE("Buchberger criterion across a random corpus") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto R = make_ring(trial % 2 ? 2 : 3, {"x", "y"});
        std::vector<PolyVec> gens;
        int ngens = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < ngens; ++i) {
            Polynomial f = Polynomial::zero(R);
            for (int k = 0; k < 3; ++k) {
                Exponents e{static_cast<std::uint32_t>(rng() % 4),
                            static_cast<std::uint32_t>(rng() % 4)};
                f = f + Polynomial::monomial(R, std::move(e),
                                             R->fq().element_at(rng() % R->fq().q()));
            }
            if (!f.is_zero()) gens.push_back({f});
        }
        SubmoduleGB gb(R, 1, gens);
        CHECK(buchberger_criterion(R, gb.basis()));
        for (const auto& g : gens) CHECK(gb.contains(g));
    }
}

TEST_CASE("membership is order-independent (lex and grlex agree with grevlex)") {
    auto F = Fq::make(3, 1);
    for (OrderKind k : {OrderKind::Grevlex, OrderKind::Lex, OrderKind::Grlex}) {
        auto R = Ring::make(F, {"x", "y"}, k);
        SubmoduleGB gb(R, 1, ideal_gens(R, {"x^2 - y", "y^2"}));
        CHECK(gb.contains({parse_polynomial(R, "x^4")}));
        CHECK(gb.contains({parse_polynomial(R, "x^2*y^3 - y^4")}));
        CHECK(!gb.contains({parse_polynomial(R, "x^2")}));
        CHECK(!gb.contains({parse_polynomial(R, "x*y")}));
        CHECK(buchberger_criterion(R, gb.basis()));
    }
}

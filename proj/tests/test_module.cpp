#include <doctest.h>

#include <random>

#include "cartier/presentation.hpp"

using namespace cartier;

namespace {

RingPtr make_ring(std::uint64_t p, std::vector<std::string> vars) {
    return Ring::make(Fq::make(p, 1), std::move(vars));
}

} // namespace

TEST_CASE("multiplication by x on R: kernel 0, cokernel R/(x)") {
    auto R = make_ring(3, {"x"});
    PresPtr free1 = ModulePresentation::free_module(R, 1);
    ModuleMap mx = ModuleMap::multiplication(free1, parse_polynomial(R, "x"));
    KernelResult k = mx.kernel();
    CHECK(k.module->is_zero_module());
    CokernelResult c = mx.cokernel();
    CHECK(!c.module->is_zero_module());
    CHECK(c.module->is_zero_elem({parse_polynomial(R, "x")}));
    auto basis = c.module->fq_basis();
    REQUIRE(basis.has_value());
    CHECK(basis->size() == 1); // R/(x) is one-dimensional
}

TEST_CASE("zero map M -> M: kernel M, cokernel M") {
    auto R = make_ring(3, {"x"});
    PresPtr m = ModulePresentation::make(R, 1, {{parse_polynomial(R, "x^2")}});
    ModuleMap z = ModuleMap::zero(m, m);
    KernelResult k = z.kernel();
    // kernel = M: its generators span everything
    CHECK(k.module->fq_basis()->size() == 2);
    CokernelResult c = z.cokernel();
    CHECK(c.module->fq_basis()->size() == 2);
}

TEST_CASE("projection R -> R/(x^2): kernel (x^2), cokernel 0") {
    auto R = make_ring(3, {"x"});
    PresPtr free1 = ModulePresentation::free_module(R, 1);
    PresPtr quot = ModulePresentation::make(R, 1, {{parse_polynomial(R, "x^2")}});
    ModuleMap proj = ModuleMap::make(free1, quot, {unit_vec(R, 1, 0)});
    KernelResult k = proj.kernel();
    REQUIRE(k.gens_in_source.size() == 1);
    CHECK(k.gens_in_source[0][0] == parse_polynomial(R, "x^2"));
    CHECK(k.module->relations().empty()); // x^2 R is free
    CHECK(proj.cokernel().module->is_zero_module());
}

TEST_CASE("map well-definedness is enforced") {
    auto R = make_ring(3, {"x"});
    PresPtr quot = ModulePresentation::make(R, 1, {{parse_polynomial(R, "x^2")}});
    PresPtr free1 = ModulePresentation::free_module(R, 1);
    // R/(x^2) -> R sending the generator to 1 is not well-defined
    CHECK_THROWS_AS(ModuleMap::make(quot, free1, {unit_vec(R, 1, 0)}), AlgebraError);
    // sending it to anything killed by x^2 is fine (only 0 in a free module)
    CHECK_NOTHROW(ModuleMap::make(quot, free1, {zero_vec(R, 1)}));
}

TEST_CASE("exactness contracts on random maps") {
    std::mt19937_64 rng(99);
    auto R = make_ring(3, {"x"});
    for (int trial = 0; trial < 15; ++trial) {
        PresPtr src = ModulePresentation::make(
            R, 2,
            {{parse_polynomial(R, "x^3"), Polynomial::zero(R)},
             {Polynomial::zero(R), parse_polynomial(R, "x^2")}});
        PresPtr dst = ModulePresentation::make(
            R, 2,
            {{parse_polynomial(R, "x^2"), Polynomial::zero(R)},
             {Polynomial::zero(R), parse_polynomial(R, "x^4")}});
        // random map: generator i -> random element, then keep only well-defined ones
        std::vector<PolyVec> mat;
        for (int i = 0; i < 2; ++i) {
            PolyVec v = zero_vec(R, 2);
            for (int j = 0; j < 2; ++j) {
                // multiples of x^2 are always well-defined images here
                std::uint32_t extra = static_cast<std::uint32_t>(rng() % 3);
                v[static_cast<std::size_t>(j)] = Polynomial::monomial(
                    R, {2 + extra}, R->fq().element_at(rng() % 3));
            }
            mat.push_back(std::move(v));
        }
        ModuleMap phi = ModuleMap::make(src, dst, mat);
        KernelResult k = phi.kernel();
        CokernelResult c = phi.cokernel();
        // inclusion then phi is zero
        for (const auto& kg : k.gens_in_source) CHECK(dst->is_zero_elem(phi.apply(kg)));
        // projection after phi is zero
        for (std::size_t i = 0; i < src->rank(); ++i)
            CHECK(c.module->is_zero_elem(phi.apply(unit_vec(R, 2, i))));
        // rank-nullity over F_q on the finite-dimensional carriers:
        // dim ker + dim im = dim src; dim im = dim dst - dim coker
        auto dsrc = src->fq_basis(), ddst = dst->fq_basis(), dker = k.module->fq_basis(),
             dcok = c.module->fq_basis();
        REQUIRE((dsrc && ddst && dker && dcok));
        CHECK(dker->size() + (ddst->size() - dcok->size()) == dsrc->size());
    }
}

TEST_CASE("annihilator examples") {
    auto R = make_ring(3, {"x"});
    PresPtr m1 = ModulePresentation::make(R, 1, {{parse_polynomial(R, "x^2")}});
    auto a1 = annihilator(*m1);
    REQUIRE(a1.size() == 1);
    CHECK(a1[0] == parse_polynomial(R, "x^2"));

    PresPtr m2 = ModulePresentation::free_module(R, 1);
    CHECK(annihilator(*m2).empty()); // zero ideal

    auto R2 = make_ring(3, {"x", "y"});
    PresPtr m3 = ModulePresentation::make(
        R2, 2,
        {{parse_polynomial(R2, "x"), Polynomial::zero(R2)},
         {Polynomial::zero(R2), parse_polynomial(R2, "y")}});
    auto a3 = annihilator(*m3);
    REQUIRE(a3.size() == 1);
    CHECK(a3[0] == parse_polynomial(R2, "x*y"));
}

TEST_CASE("support containment with power cap") {
    auto R = make_ring(3, {"x"});
    auto x = parse_polynomial(R, "x");
    auto x2 = parse_polynomial(R, "x^2");
    CHECK(support_contained(R, {x2}, {x}, 64) == Containment::Contained);
    CHECK(support_contained(R, {x}, {x}, 64) == Containment::Contained);

    auto R2 = make_ring(3, {"x", "y"});
    auto xx = parse_polynomial(R2, "x");
    auto yy = parse_polynomial(R2, "y");
    // V(x) vs V(y): no y-power lies in (x); reported undecided, never "false"
    CHECK(support_contained(R2, {xx}, {yy}, 16) == Containment::Undecided);
}

TEST_CASE("ideal intersection") {
    auto R = make_ring(3, {"x", "y"});
    auto inter = intersect_ideals(R, {parse_polynomial(R, "x")}, {parse_polynomial(R, "y")});
    REQUIRE(inter.size() == 1);
    CHECK(inter[0] == parse_polynomial(R, "x*y"));
}

TEST_CASE("finite dimension detection") {
    auto R = make_ring(3, {"x", "y"});
    PresPtr inf = ModulePresentation::make(R, 1, {{parse_polynomial(R, "x")}});
    CHECK(!inf.get()->fq_basis().has_value()); // R/(x) = F_3[y] is infinite
    PresPtr fin = ModulePresentation::make(
        R, 1, {{parse_polynomial(R, "x^2")}, {parse_polynomial(R, "y^2")}, {parse_polynomial(R, "x*y")}});
    auto basis = fin->fq_basis();
    REQUIRE(basis.has_value());
    CHECK(basis->size() == 3); // 1, x, y
}

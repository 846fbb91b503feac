#pragma once

#include "cartier/cartier_module.hpp"

namespace cartier {

// The Cartier operator on the dualizing module of affine n-space: rank-1 free
// module with kappa(x^d . gen) = gen exactly at d = (q-1,...,q-1).
CMPtr dualizing_cartier(const RingPtr& ring);

// Finite sequence of Cartier modules with equivariant differentials,
// cohomological degrees 0..length; cohomology carries induced structures.
struct CartierComplex {
    int length = 0;
    std::map<int, CMPtr> terms;
    std::map<int, CartierMorphism> differentials; // d_k : terms[k] -> terms[k+1]
    std::map<int, CMPtr> cohomology;
};

// Hom-Koszul complex on a regular sequence g_1..g_t with the S-component
// structural twist kappa((prod_{i in S} g_i)^{q-1} . -); for t = 1 this is
// M --g--> M with H^0 the g-torsion and H^1 = M/gM twisted by g^{q-1}.
CartierComplex shriek_regular_sequence(const CMPtr& m, const std::vector<Polynomial>& gs);

// stalk at a closed point cut out by the given regular system of parameters
CartierComplex stalk_closed_point(const CMPtr& m, const std::vector<Polynomial>& point);

struct ContractionWitness {
    int degree_bound = 0; // C: max X-degree over the kappa-table values
    int ell0 = 0;         // floor(C q / (q-1))
    // N = M_{<=ell0} as an R-submodule: generators X^k m_i and their kappa
    // values (all verified to lie back in N)
    std::vector<PolyVec> n_gens;
    std::vector<PolyVec> n_kappa;
    std::size_t n_generator_count = 0;
    struct Check {
        int ell;
        bool ok;
    };
    std::vector<Check> checks; // ell = ell0 (kappa(N) in N) and ell0+1..ell0+extra
    struct Reach {
        std::size_t gen;
        int xpower;
        int steps; // kappa-iterations until the class lands in N
    };
    std::vector<Reach> reach;
    bool all_ok() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
};

// Anderson contraction along the last variable X: computes C and
// ell0 = floor(Cq/(q-1)), verifies kappa(M_{<=ell}) in M_{<=ell-1} for
// ell0 < ell <= ell0+ell_extra and kappa(N) in N for N = M_{<=ell0}, and
// iterates kappa on each class X^k m_i until it lands in N.
// Throws "contraction bound violated" if any containment fails.
ContractionWitness pushforward_contract(const CMPtr& m, int ell_extra, int nil_cap = 64);

struct SupportReport {
    std::vector<Polynomial> ideal; // reduced basis of the stabilized annihilator
    int stabilization_exponent = 0;
    bool empty = false; // unit ideal: the crystal is zero
    std::string variety;
};

// Supp_crys = V(Ann of the stabilized kappa-power image)
SupportReport crystalline_support(const CMPtr& m, int cap);

// M restricted to the basic open D(g), presented over F_q[x.., y]/(y g - 1)
// with kappa(v/s) = kappa(v s^{q-1})/s
CMPtr restrict_basic_open(const CMPtr& m, const Polynomial& g);

struct KashiwaraReport {
    bool inclusion_nil_iso = false; // M[f] -> M
    NilpotenceVerdict cokernel_verdict;
    bool h1_nilpotent = false; // M/fM with kappa(f^{q-1} . -)
    NilpotenceVerdict h1_verdict;
    bool passed() const { return inclusion_nil_iso && h1_nilpotent; }
};

// checks the two computational halves of Kashiwara equivalence for a module
// killed by f^N; throws "not supported on V(f)" when the precondition fails
KashiwaraReport verify_kashiwara(const CMPtr& m, const Polynomial& f, int npower, int cap);

struct StalkDegreeInfo {
    std::optional<std::size_t> dim; // F_q-dimension when finite
    bool nilpotent = false;
    std::optional<int> order;
};

struct PointReport {
    Polynomial point; // monic irreducible
    std::map<int, StalkDegreeInfo> degrees;
    bool non_nilpotent = false;
    Containment in_support = Containment::Undecided;
};

struct PointwiseReport {
    std::vector<PointReport> points; // all enumerated points
    SupportReport support;
    bool all_non_nilpotent_in_support = true;
};

// enumerates closed points of A^1 (monic irreducibles of degree <= bound),
// tests stalk nilpotence at each, and cross-checks against Supp_crys
PointwiseReport pointwise_nilpotence(const CMPtr& m, int degree_bound, int chain_cap,
                                     int power_cap);

// monic irreducible polynomials over F_q of degree 1..max_degree, sorted by
// (degree, coefficient vector)
std::vector<Polynomial> monic_irreducibles(const RingPtr& ring, int max_degree);

} // namespace cartier

#pragma once

#include <memory>
#include <optional>

#include "cartier/submodule.hpp"

namespace cartier {

class ModulePresentation;
using PresPtr = std::shared_ptr<const ModulePresentation>;

// Finitely presented module F/<relations>, F = R^rank.  Element equality is
// decided by normal form against the Groebner basis of the relation
// submodule, computed once at construction.
class ModulePresentation {
public:
    static PresPtr make(RingPtr ring, std::size_t rank, std::vector<PolyVec> relations);
    static PresPtr free_module(RingPtr ring, std::size_t rank);
    static PresPtr zero_module(RingPtr ring);

    const RingPtr& ring() const { return ring_; }
    std::size_t rank() const { return rank_; }
    const std::vector<PolyVec>& relations() const { return relations_; }
    const SubmoduleGB& relation_gb() const { return rel_gb_; }

    PolyVec nf(const PolyVec& v) const { return rel_gb_.reduce(v); }
    bool is_zero_elem(const PolyVec& v) const { return rel_gb_.contains(v); }
    bool elem_equal(const PolyVec& a, const PolyVec& b) const {
        return is_zero_elem(vec_sub(a, b));
    }
    bool is_zero_module() const;

    // Standard monomials (comp, exponent) when the module has finite
    // dimension over F_q; nullopt otherwise.  Throws when finite but larger
    // than dim_cap.
    struct VecMono {
        std::size_t comp;
        Exponents exp;
        bool operator<(const VecMono& o) const {
            return comp != o.comp ? comp < o.comp : exp < o.exp;
        }
        bool operator==(const VecMono& o) const { return comp == o.comp && exp == o.exp; }
    };
    std::optional<std::vector<VecMono>> fq_basis(std::size_t dim_cap = 65536) const;

private:
    ModulePresentation(RingPtr ring, std::size_t rank, std::vector<PolyVec> relations);
    RingPtr ring_;
    std::size_t rank_;
    std::vector<PolyVec> relations_;
    SubmoduleGB rel_gb_;
};

struct KernelResult;
struct CokernelResult;

// R-linear map between presented modules, given by the images of the source
// generators.  Well-definedness (relations map to zero) is checked at
// construction.
class ModuleMap {
public:
    static ModuleMap make(PresPtr src, PresPtr dst, std::vector<PolyVec> matrix);
    static ModuleMap identity(PresPtr m);
    static ModuleMap zero(PresPtr src, PresPtr dst);
    static ModuleMap multiplication(PresPtr m, const Polynomial& f);
    static ModuleMap compose(const ModuleMap& g, const ModuleMap& f); // g after f

    const PresPtr& source() const { return src_; }
    const PresPtr& target() const { return dst_; }
    const std::vector<PolyVec>& matrix() const { return matrix_; }

    PolyVec apply(const PolyVec& v) const;
    bool is_zero_map() const;

    KernelResult kernel() const;
    CokernelResult cokernel() const;

private:
    ModuleMap(PresPtr src, PresPtr dst, std::vector<PolyVec> matrix);
    PresPtr src_, dst_;
    std::vector<PolyVec> matrix_;
};

struct KernelResult {
    PresPtr module;
    ModuleMap inclusion;                // kernel -> source
    std::vector<PolyVec> gens_in_source;
};

struct CokernelResult {
    PresPtr module;
    ModuleMap projection; // target -> cokernel
};

// ideal helpers (ideals are rank-1 submodules)
std::vector<Polynomial> ideal_groebner(const RingPtr& ring, std::vector<Polynomial> gens);
bool ideal_contains(const RingPtr& ring, const std::vector<Polynomial>& gens,
                    const Polynomial& f);
// (sub : v) = { f : f*v in sub }, sub a submodule of R^rank
std::vector<Polynomial> quotient_ideal(const RingPtr& ring, std::size_t rank,
                                       const std::vector<PolyVec>& sub, const PolyVec& v);
std::vector<Polynomial> intersect_ideals(const RingPtr& ring,
                                         const std::vector<Polynomial>& a,
                                         const std::vector<Polynomial>& b);

// Ann(M), returned as a reduced Groebner basis (empty list = zero ideal)
std::vector<Polynomial> annihilator(const ModulePresentation& m);

enum class Containment { Contained, Undecided };

// decides V(a) contained in V(b) by bounded power membership b_i^k in <a>;
// inability to certify within power_cap reports Undecided, never "false"
Containment support_contained(const RingPtr& ring, const std::vector<Polynomial>& a,
                              const std::vector<Polynomial>& b, int power_cap);

} // namespace cartier

#pragma once

#include <functional>
#include <map>

#include "cartier/linalg.hpp"
#include "cartier/presentation.hpp"

namespace cartier {

class CartierModule;
using CMPtr = std::shared_ptr<const CartierModule>;

// (generator index, digit vector) -> module element; absent entries are zero
using KappaKey = std::pair<std::size_t, Exponents>;
using KappaTable = std::map<KappaKey, PolyVec>;

// Module presentation together with the table of values kappa(x^d g_i), the
// complete data of a q^{-1}-semilinear operator.  The constructor checks that
// every relation is sent to zero (through every digit), so kappa descends to
// the presented module.
class CartierModule {
public:
    static CMPtr make(PresPtr pres, KappaTable table);
    static CMPtr zero_structure(PresPtr pres); // kappa = 0

    const PresPtr& pres() const { return pres_; }
    const RingPtr& ring() const { return pres_->ring(); }
    std::size_t rank() const { return pres_->rank(); }
    const KappaTable& table() const { return table_; }
    std::uint64_t q() const { return pres_->ring()->fq().q(); }

    const PolyVec* table_value(std::size_t gen, const Exponents& digit) const;

    // kappa(v): digit-decompose the coordinates and assemble from the table
    PolyVec kappa(const PolyVec& v) const;
    PolyVec kappa_iter(PolyVec v, int e) const;

private:
    CartierModule(PresPtr pres, KappaTable table);
    PresPtr pres_;
    KappaTable table_;
};

// enumerate all digit vectors in {0..q-1}^n (deterministic order); guarded
// against blowup
void for_each_digit(std::size_t nvars, std::uint64_t q,
                    const std::function<void(const Exponents&)>& fn);

// kappa-equivariant map between Cartier modules; the commuting square is
// checked on every (generator, digit) pair at construction.
class CartierMorphism {
public:
    static CartierMorphism make(CMPtr src, CMPtr dst, ModuleMap map);
    static CartierMorphism identity(CMPtr m);
    static CartierMorphism compose(const CartierMorphism& g, const CartierMorphism& f);

    const CMPtr& source() const { return src_; }
    const CMPtr& target() const { return dst_; }
    const ModuleMap& map() const { return map_; }

private:
    CartierMorphism(CMPtr src, CMPtr dst, ModuleMap map);
    CMPtr src_, dst_;
    ModuleMap map_;
};

struct NilpotenceVerdict {
    bool nilpotent = false;
    std::optional<int> order;             // smallest e with kappa^e-image zero
    int stabilization_exponent = 0;       // e* at which the chain is stationary
    std::vector<PolyVec> stabilized_gens; // canonical gens of the stabilized image
};

// generators of kappa((sigma x id)_* N) for N spanned by `gens` (in M)
std::vector<PolyVec> kappa_image_gens(const CartierModule& m, const std::vector<PolyVec>& gens);

// descending chain M = N_0 >= N_1 >= ... until stationary; errors past cap
NilpotenceVerdict image_chain(const CartierModule& m, int cap);
inline NilpotenceVerdict is_nilpotent(const CartierModule& m, int cap) {
    return image_chain(m, cap);
}

struct ElementNilpotence {
    enum class Status { Nilpotent, NotNilpotent, Undecided };
    Status status = Status::Undecided;
    std::optional<int> order;
};

// strong criterion: smallest e with kappa^e-image of R.m equal to zero
ElementNilpotence element_locally_nilpotent(const CartierModule& m, const PolyVec& elem,
                                            int cap);

// a kappa-stable submodule presented in its own right, with the embedding data
struct CartierSub {
    CMPtr module;
    std::vector<PolyVec> gens_in_parent;
    ModuleMap inclusion; // module -> parent
};

// restrict the structure of `parent` to the submodule spanned by `gens`;
// throws when the span is not kappa-stable
CartierSub cartier_submodule(const CMPtr& parent, std::vector<PolyVec> gens);

// smallest kappa-stable submodule containing R.gens (ascending chain)
CartierSub stable_closure(const CMPtr& m, std::vector<PolyVec> gens, int cap);

// the image submodule kappa((sigma x id)_* M) with its restricted structure
CartierSub kappa_image_cartier(const CMPtr& m);

// kernel of a Cartier morphism with the restricted structure
struct CartierKernel {
    CMPtr module;
    ModuleMap inclusion;
};
CartierKernel cartier_kernel(const CartierMorphism& phi);

// cokernel with the pushed-forward structure
struct CartierCokernel {
    CMPtr module;
    ModuleMap projection;
};
CartierCokernel cartier_cokernel(const CartierMorphism& phi);

struct NilIsoVerdict {
    bool nil_isomorphism = false;
    NilpotenceVerdict kernel_verdict;
    NilpotenceVerdict cokernel_verdict;
};
NilIsoVerdict nil_isomorphism(const CartierMorphism& phi, int cap);

struct CrysZeroVerdict {
    bool zero = false;
    NilpotenceVerdict image_verdict;
};
// a morphism vanishes in the localized category iff its image is nilpotent
CrysZeroVerdict is_zero_in_crys(const CartierMorphism& phi, int cap);

// Finite-dimensional carrier: the F_q-basis of standard monomials plus the
// matrices of m -> kappa(x^d m).  Requires finite dimension over F_q.
struct FiniteCarrier {
    CMPtr module;
    std::vector<ModulePresentation::VecMono> basis;
    std::map<Exponents, FqMatrix> digit_ops; // columns indexed by basis

    static FiniteCarrier build(const CMPtr& m, std::size_t dim_cap = 4096);

    std::size_t dim() const { return basis.size(); }
    std::size_t dim_fp() const { return basis.size() * module->ring()->fq().e(); }
    std::vector<Fq::Elem> coords(const PolyVec& v) const;
    PolyVec element(const std::vector<Fq::Elem>& coords) const;
    FqMatrix kappa_matrix() const; // the matrix of kappa itself (digit zero)
};

struct NilpotentPart {
    int exponent; // the e with M_e returned ("all": first stationary e)
    CartierSub part;
};

// largest kappa-stable submodule killed by kappa^e (e >= 1), or the full
// locally nilpotent part when e is nullopt ("all").  Finite F_p-dimension only.
NilpotentPart nilpotent_part(const CMPtr& m, std::optional<int> e, std::size_t dim_cap = 4096);

} // namespace cartier

#include "cartier/cartier_module.hpp"

#include <algorithm>
#include <sstream>

namespace cartier {

namespace {

std::string digit_to_string(const Exponents& d) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) os << ",";
        os << d[i];
    }
    os << "]";
    return os.str();
}

// pretty name for the monomial multiple x^d * (relation or generator)
std::string monomial_prefix(const RingPtr& ring, const Exponents& d) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] == 0) continue;
        if (any) os << "*";
        any = true;
        os << ring->var_name(k);
        if (d[k] > 1) os << "^" << d[k];
    }
    return any ? os.str() : "1";
}

} // namespace

void for_each_digit(std::size_t nvars, std::uint64_t q,
                    const std::function<void(const Exponents&)>& fn) {
    double count = 1;
    for (std::size_t i = 0; i < nvars; ++i) count *= static_cast<double>(q);
    if (count > double(1 << 22)) throw AlgebraError("digit enumeration too large (q^n blowup)");
    Exponents d(nvars, 0);
    while (true) {
        fn(d);
        std::size_t k = 0;
        while (k < nvars) {
            if (++d[k] < q) break;
            d[k] = 0;
            ++k;
        }
        if (k == nvars) break;
    }
}

CartierModule::CartierModule(PresPtr pres, KappaTable table)
    : pres_(std::move(pres)), table_(std::move(table)) {}

CMPtr CartierModule::make(PresPtr pres, KappaTable table) {
    const RingPtr& ring = pres->ring();
    const std::uint64_t q = ring->fq().q();
    KappaTable normalized;
    for (auto& [key, value] : table) {
        if (key.first >= pres->rank()) throw AlgebraError("kappa table generator index out of range");
        if (key.second.size() != ring->nvars())
            throw AlgebraError("kappa table digit vector has wrong length");
        for (auto d : key.second)
            if (d >= q)
                throw AlgebraError("digit out of range [0, q-1] in kappa table entry g" +
                                   std::to_string(key.first) + " d=" + digit_to_string(key.second));
        if (value.size() != pres->rank()) throw AlgebraError("kappa table value has wrong rank");
        for (const auto& p : value) check_same_ring(p.ring(), ring);
        PolyVec nf = pres->nf(value);
        if (!vec_is_zero(nf)) normalized.emplace(key, std::move(nf));
    }
    CMPtr m(new CartierModule(std::move(pres), std::move(normalized)));
    // well-definedness: kappa(x^d r) must vanish in M for every relation r
    for (std::size_t ri = 0; ri < m->pres()->relations().size(); ++ri) {
        const PolyVec& r = m->pres()->relations()[ri];
        for_each_digit(ring->nvars(), q, [&](const Exponents& d) {
            PolyVec v = m->kappa(vec_times_monomial(r, d, 1));
            if (!vec_is_zero(v))
                throw AlgebraError("kappa table inconsistent: kappa(" +
                                   monomial_prefix(ring, d) + "*" + vec_to_string(r) +
                                   ") = " + vec_to_string(v) + " is nonzero (relation " +
                                   std::to_string(ri) + ", digit " + digit_to_string(d) + ")");
        });
    }
    return m;
}

CMPtr CartierModule::zero_structure(PresPtr pres) {
    return make(std::move(pres), {});
}

const PolyVec* CartierModule::table_value(std::size_t gen, const Exponents& digit) const {
    auto it = table_.find({gen, digit});
    return it == table_.end() ? nullptr : &it->second;
}

PolyVec CartierModule::kappa(const PolyVec& v) const {
    const RingPtr& ring = pres_->ring();
    if (v.size() != pres_->rank()) throw AlgebraError("element has wrong ambient rank");
    PolyVec acc = zero_vec(ring, pres_->rank());
    for (std::size_t i = 0; i < v.size(); ++i) {
        check_same_ring(v[i].ring(), ring);
        if (v[i].is_zero()) continue;
        DigitDecomposition dec = digit_decompose(v[i]);
        for (const auto& [d, cofactor] : dec.parts) {
            const PolyVec* val = table_value(i, d);
            if (!val) continue;
            acc = vec_add(acc, vec_scale(*val, cofactor));
        }
    }
    return pres_->nf(acc);
}

PolyVec CartierModule::kappa_iter(PolyVec v, int e) const {
    for (int i = 0; i < e; ++i) v = kappa(v);
    return v;
}

CartierMorphism::CartierMorphism(CMPtr src, CMPtr dst, ModuleMap map)
    : src_(std::move(src)), dst_(std::move(dst)), map_(std::move(map)) {}

CartierMorphism CartierMorphism::make(CMPtr src, CMPtr dst, ModuleMap map) {
    const RingPtr& ring = src->ring();
    check_same_ring(ring, dst->ring());
    const std::uint64_t q = src->q();
    // equivariance on every (generator, digit) pair
    for (std::size_t i = 0; i < src->rank(); ++i) {
        for_each_digit(ring->nvars(), q, [&](const Exponents& d) {
            PolyVec lhs = map.apply(src->kappa(vec_times_monomial(unit_vec(ring, src->rank(), i), d, 1)));
            PolyVec rhs = dst->kappa(vec_times_monomial(map.matrix()[i], d, 1));
            if (!dst->pres()->elem_equal(lhs, rhs))
                throw AlgebraError("map is not kappa-equivariant on generator " + std::to_string(i) +
                                   " at digit " + digit_to_string(d));
        });
    }
    return CartierMorphism(std::move(src), std::move(dst), std::move(map));
}

CartierMorphism CartierMorphism::identity(CMPtr m) {
    ModuleMap id = ModuleMap::identity(m->pres());
    CMPtr copy = m;
    return CartierMorphism(std::move(m), std::move(copy), std::move(id));
}

CartierMorphism CartierMorphism::compose(const CartierMorphism& g, const CartierMorphism& f) {
    return CartierMorphism(f.src_, g.dst_, ModuleMap::compose(g.map_, f.map_));
}

// ---------------------------------------------------------------------------
// nilpotence

std::vector<PolyVec> kappa_image_gens(const CartierModule& m, const std::vector<PolyVec>& gens) {
    const RingPtr& ring = m.ring();
    std::vector<PolyVec> out;
    for (const auto& g : gens) {
        for_each_digit(ring->nvars(), m.q(), [&](const Exponents& d) {
            PolyVec v = m.kappa(vec_times_monomial(g, d, 1));
            if (!vec_is_zero(v)) out.push_back(std::move(v));
        });
    }
    return out;
}

namespace {

// Groebner basis of (span(gens) + relations), the submodule-of-M datum
SubmoduleGB with_relations(const CartierModule& m, std::vector<PolyVec> gens) {
    for (const auto& r : m.pres()->relations()) gens.push_back(r);
    return SubmoduleGB(m.ring(), m.rank(), std::move(gens));
}

// gens of the submodule inside M read off the basis, relations removed
std::vector<PolyVec> gens_in_module(const CartierModule& m, const SubmoduleGB& gb) {
    std::vector<PolyVec> out;
    for (const auto& g : gb.basis()) {
        PolyVec v = m.pres()->nf(g);
        if (!vec_is_zero(v)) out.push_back(std::move(v));
    }
    return out;
}

} // namespace

NilpotenceVerdict image_chain(const CartierModule& m, int cap) {
    if (cap < 1) throw AlgebraError("image chain cap must be >= 1");
    NilpotenceVerdict verdict;
    if (m.pres()->is_zero_module()) {
        verdict.nilpotent = true;
        verdict.order = 0;
        verdict.stabilization_exponent = 0;
        return verdict;
    }
    std::vector<PolyVec> gens;
    for (std::size_t i = 0; i < m.rank(); ++i) gens.push_back(unit_vec(m.ring(), m.rank(), i));
    SubmoduleGB cur = with_relations(m, gens);
    std::vector<PolyVec> cur_gens = gens_in_module(m, cur);
    for (int e = 1; e <= cap; ++e) {
        std::vector<PolyVec> next_gens = kappa_image_gens(m, cur_gens);
        SubmoduleGB next = with_relations(m, next_gens);
        std::vector<PolyVec> next_in_m = gens_in_module(m, next);
        if (next_in_m.empty()) {
            // N_e = 0, hence stationary from here on
            verdict.nilpotent = true;
            verdict.order = e;
            verdict.stabilization_exponent = e;
            return verdict;
        }
        if (next.same_submodule(cur)) {
            verdict.nilpotent = false;
            verdict.stabilization_exponent = std::max(e - 1, 1);
            verdict.stabilized_gens = std::move(next_in_m);
            return verdict;
        }
        cur = std::move(next);
        cur_gens = std::move(next_in_m);
    }
    throw AlgebraError("stabilization cap exceeded");
}

ElementNilpotence element_locally_nilpotent(const CartierModule& m, const PolyVec& elem,
                                            int cap) {
    ElementNilpotence out;
    PolyVec e0 = m.pres()->nf(elem);
    if (vec_is_zero(e0)) {
        out.status = ElementNilpotence::Status::Nilpotent;
        out.order = 0;
        return out;
    }
    // chain U_0 = R.m, U_{e+1} = kappa-image(U_e); unlike the whole-module
    // chain this need not be descending, so detection is equality of
    // consecutive steps only
    SubmoduleGB cur = with_relations(m, {e0});
    std::vector<PolyVec> cur_gens = gens_in_module(m, cur);
    for (int e = 1; e <= cap; ++e) {
        std::vector<PolyVec> next_gens = kappa_image_gens(m, cur_gens);
        SubmoduleGB next = with_relations(m, next_gens);
        std::vector<PolyVec> next_in_m = gens_in_module(m, next);
        if (next_in_m.empty()) {
            out.status = ElementNilpotence::Status::Nilpotent;
            out.order = e;
            return out;
        }
        if (next.same_submodule(cur)) {
            out.status = ElementNilpotence::Status::NotNilpotent;
            return out;
        }
        cur = std::move(next);
        cur_gens = std::move(next_in_m);
    }
    out.status = ElementNilpotence::Status::Undecided;
    return out;
}

// ---------------------------------------------------------------------------
// submodules carrying the restricted structure

CartierSub cartier_submodule(const CMPtr& parent, std::vector<PolyVec> gens) {
    const RingPtr& ring = parent->ring();
    std::vector<PolyVec> nfgens;
    for (auto& g : gens) {
        PolyVec v = parent->pres()->nf(g);
        if (!vec_is_zero(v)) nfgens.push_back(std::move(v));
    }
    const std::size_t u = nfgens.size();
    // lift basis: [gens | parent relations]
    std::vector<PolyVec> lift_gens = nfgens;
    for (const auto& r : parent->pres()->relations()) lift_gens.push_back(r);
    SubmoduleGB lifter(ring, parent->rank(), lift_gens, SubmoduleGB::Track::Tags);

    // relations among the generators inside the parent
    std::vector<PolyVec> rels;
    for (const auto& syz : lifter.syzygies()) {
        PolyVec r(syz.begin(), syz.begin() + static_cast<std::ptrdiff_t>(u));
        if (!vec_is_zero(r)) rels.push_back(std::move(r));
    }
    PresPtr pres = ModulePresentation::make(ring, u, std::move(rels));

    KappaTable table;
    for (std::size_t j = 0; j < u; ++j) {
        for_each_digit(ring->nvars(), parent->q(), [&](const Exponents& d) {
            PolyVec v = parent->kappa(vec_times_monomial(nfgens[j], d, 1));
            if (vec_is_zero(v)) return;
            auto coeffs = lifter.lift(v);
            if (!coeffs)
                throw AlgebraError("submodule is not kappa-stable: kappa of generator " +
                                   std::to_string(j) + " leaves the span");
            PolyVec value(coeffs->begin(), coeffs->begin() + static_cast<std::ptrdiff_t>(u));
            value = pres->nf(value);
            if (!vec_is_zero(value)) table.emplace(KappaKey{j, d}, std::move(value));
        });
    }
    CMPtr sub = CartierModule::make(pres, std::move(table));
    ModuleMap incl = u == 0 ? ModuleMap::zero(pres, parent->pres())
                            : ModuleMap::make(pres, parent->pres(), nfgens);
    return CartierSub{std::move(sub), std::move(nfgens), std::move(incl)};
}

CartierSub stable_closure(const CMPtr& m, std::vector<PolyVec> gens, int cap) {
    std::vector<PolyVec> nfgens;
    for (auto& g : gens) {
        PolyVec v = m->pres()->nf(g);
        if (!vec_is_zero(v)) nfgens.push_back(std::move(v));
    }
    SubmoduleGB cur = with_relations(*m, nfgens);
    std::vector<PolyVec> cur_gens = gens_in_module(*m, cur);
    for (int step = 0; step < cap; ++step) {
        std::vector<PolyVec> bigger = cur_gens;
        for (auto& v : kappa_image_gens(*m, cur_gens)) bigger.push_back(std::move(v));
        SubmoduleGB next = with_relations(*m, bigger);
        if (next.same_submodule(cur)) return cartier_submodule(m, cur_gens);
        cur = std::move(next);
        cur_gens = gens_in_module(*m, cur);
    }
    throw AlgebraError("stabilization cap exceeded");
}

CartierSub kappa_image_cartier(const CMPtr& m) {
    std::vector<PolyVec> gens;
    for (std::size_t i = 0; i < m->rank(); ++i)
        gens.push_back(unit_vec(m->ring(), m->rank(), i));
    return cartier_submodule(m, kappa_image_gens(*m, gens));
}

// ---------------------------------------------------------------------------
// kernels, cokernels, nil-isomorphisms

CartierKernel cartier_kernel(const CartierMorphism& phi) {
    KernelResult k = phi.map().kernel();
    // kernels of equivariant maps are kappa-stable; restrict the structure
    CartierSub sub = cartier_submodule(phi.source(), k.gens_in_source);
    return CartierKernel{sub.module, sub.inclusion};
}

CartierCokernel cartier_cokernel(const CartierMorphism& phi) {
    CokernelResult c = phi.map().cokernel();
    const CMPtr& dst = phi.target();
    KappaTable table;
    for (const auto& [key, value] : dst->table()) {
        PolyVec v = c.module->nf(value);
        if (!vec_is_zero(v)) table.emplace(key, std::move(v));
    }
    CMPtr cok = CartierModule::make(c.module, std::move(table));
    return CartierCokernel{std::move(cok), std::move(c.projection)};
}

NilIsoVerdict nil_isomorphism(const CartierMorphism& phi, int cap) {
    NilIsoVerdict v;
    v.kernel_verdict = is_nilpotent(*cartier_kernel(phi).module, cap);
    v.cokernel_verdict = is_nilpotent(*cartier_cokernel(phi).module, cap);
    v.nil_isomorphism = v.kernel_verdict.nilpotent && v.cokernel_verdict.nilpotent;
    return v;
}

CrysZeroVerdict is_zero_in_crys(const CartierMorphism& phi, int cap) {
    std::vector<PolyVec> image_gens;
    for (const auto& row : phi.map().matrix())
        if (!phi.target()->pres()->is_zero_elem(row)) image_gens.push_back(row);
    CartierSub image = cartier_submodule(phi.target(), image_gens);
    CrysZeroVerdict out;
    out.image_verdict = is_nilpotent(*image.module, cap);
    out.zero = out.image_verdict.nilpotent;
    return out;
}

// ---------------------------------------------------------------------------
// finite-dimensional carrier and nilpotent parts

FiniteCarrier FiniteCarrier::build(const CMPtr& m, std::size_t dim_cap) {
    auto basis = m->pres()->fq_basis(dim_cap);
    if (!basis)
        throw AlgebraError("nilpotent part requires finite F_p-dimension");
    FiniteCarrier fc;
    fc.module = m;
    fc.basis = *basis;
    const RingPtr& ring = m->ring();
    for_each_digit(ring->nvars(), m->q(), [&](const Exponents& d) {
        FqMatrix mat = FqMatrix::zero(fc.basis.size(), fc.basis.size());
        for (std::size_t j = 0; j < fc.basis.size(); ++j) {
            PolyVec b = zero_vec(ring, m->rank());
            b[fc.basis[j].comp] = Polynomial::monomial(ring, fc.basis[j].exp, 1);
            std::vector<Fq::Elem> col = fc.coords(m->kappa(vec_times_monomial(b, d, 1)));
            for (std::size_t i = 0; i < col.size(); ++i) mat.rows[i][j] = col[i];
        }
        if (!mat.is_zero()) fc.digit_ops.emplace(d, std::move(mat));
    });
    return fc;
}

std::vector<Fq::Elem> FiniteCarrier::coords(const PolyVec& v) const {
    PolyVec nf = module->pres()->nf(v);
    std::vector<Fq::Elem> out(basis.size(), 0);
    for (std::size_t c = 0; c < nf.size(); ++c) {
        for (const auto& t : nf[c].terms()) {
            ModulePresentation::VecMono key{c, t.exp};
            auto it = std::lower_bound(basis.begin(), basis.end(), key);
            if (it == basis.end() || !(*it == key))
                throw AlgebraError("normal form leaves the standard-monomial basis");
            out[static_cast<std::size_t>(it - basis.begin())] = t.coeff;
        }
    }
    return out;
}

PolyVec FiniteCarrier::element(const std::vector<Fq::Elem>& coords) const {
    const RingPtr& ring = module->ring();
    PolyVec v = zero_vec(ring, module->rank());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (coords[j] == 0) continue;
        v[basis[j].comp] = v[basis[j].comp] + Polynomial::monomial(ring, basis[j].exp, coords[j]);
    }
    return v;
}

FqMatrix FiniteCarrier::kappa_matrix() const {
    Exponents zero(module->ring()->nvars(), 0);
    auto it = digit_ops.find(zero);
    if (it != digit_ops.end()) return it->second;
    return FqMatrix::zero(basis.size(), basis.size());
}

NilpotentPart nilpotent_part(const CMPtr& m, std::optional<int> e, std::size_t dim_cap) {
    if (e && *e < 1) throw AlgebraError("nilpotent part exponent must be >= 1");
    FiniteCarrier fc = FiniteCarrier::build(m, dim_cap);
    const Fq& F = m->ring()->fq();
    const std::size_t n = fc.dim();

    // M_{e+1} = intersection over digits d of the preimage of M_e under L_d;
    // each M_e is automatically an R-submodule by semilinearity
    auto next_part = [&](const FqMatrix& cur_basis) {
        FqMatrix constraints = subspace_constraints(F, cur_basis, n);
        std::vector<FqMatrix> stacked;
        for (const auto& [d, L] : fc.digit_ops) stacked.push_back(mat_mul(F, constraints, L));
        if (stacked.empty()) return row_space(F, FqMatrix::identity(n));
        return row_space(F, null_space(F, vstack(stacked)));
    };

    FqMatrix cur; // M_0 = 0
    cur.ncols = n;
    int reached = 0;
    if (e) {
        for (int step = 0; step < *e; ++step) cur = next_part(cur);
        reached = *e;
    } else {
        for (int step = 1; step <= static_cast<int>(n) + 1; ++step) {
            FqMatrix next = next_part(cur);
            if (next.nrows == cur.nrows) break; // ascending chain stationary
            cur = std::move(next);
            reached = step;
        }
        reached = std::max(reached, 1);
    }
    std::vector<PolyVec> gens;
    for (const auto& row : cur.rows) gens.push_back(fc.element(row));
    return NilpotentPart{reached, cartier_submodule(m, gens)};
}

} // namespace cartier

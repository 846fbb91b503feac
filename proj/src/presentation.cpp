#include "cartier/presentation.hpp"

#include <algorithm>

namespace cartier {

ModulePresentation::ModulePresentation(RingPtr ring, std::size_t rank,
                                       std::vector<PolyVec> relations)
    : ring_(std::move(ring)), rank_(rank), relations_(std::move(relations)),
      rel_gb_(ring_, rank_, relations_) {}

PresPtr ModulePresentation::make(RingPtr ring, std::size_t rank,
                                 std::vector<PolyVec> relations) {
    for (const auto& r : relations)
        if (r.size() != rank) throw AlgebraError("relation has wrong ambient rank");
    return PresPtr(new ModulePresentation(std::move(ring), rank, std::move(relations)));
}

PresPtr ModulePresentation::free_module(RingPtr ring, std::size_t rank) {
    return make(std::move(ring), rank, {});
}

PresPtr ModulePresentation::zero_module(RingPtr ring) {
    return make(std::move(ring), 0, {});
}

bool ModulePresentation::is_zero_module() const {
    for (std::size_t i = 0; i < rank_; ++i)
        if (!is_zero_elem(unit_vec(ring_, rank_, i))) return false;
    return true;
}

std::optional<std::vector<ModulePresentation::VecMono>>
ModulePresentation::fq_basis(std::size_t dim_cap) const {
    const std::size_t n = ring_->nvars();
    // leading terms of the relation basis, grouped by component
    std::vector<std::vector<Exponents>> leads(rank_);
    for (const auto& g : rel_gb_.basis()) {
        auto lt = leading_vec_term(g);
        leads[lt->comp].push_back(lt->exp);
    }
    // finite dimension iff every component has a pure-power lead in each variable
    std::vector<std::vector<std::uint32_t>> bound(rank_, std::vector<std::uint32_t>(n, 0));
    for (std::size_t c = 0; c < rank_; ++c) {
        for (std::size_t k = 0; k < n; ++k) {
            bool found = false;
            for (const auto& e : leads[c]) {
                bool pure = true;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != k && e[j] != 0) pure = false;
                if (pure) {
                    if (!found || e[k] < bound[c][k]) bound[c][k] = e[k];
                    found = true;
                }
            }
            if (!found) return std::nullopt;
        }
    }
    std::vector<VecMono> basis;
    for (std::size_t c = 0; c < rank_; ++c) {
        // enumerate the box below the pure-power bounds, filter by divisibility
        Exponents cur(n, 0);
        while (true) {
            bool standard = true;
            for (const auto& e : leads[c]) {
                if (exp_divides(e, cur)) {
                    standard = false;
                    break;
                }
            }
            if (standard) {
                basis.push_back({c, cur});
                if (basis.size() > dim_cap) throw AlgebraError("module dimension exceeds cap");
            }
            std::size_t k = 0;
            while (k < n) {
                if (++cur[k] < bound[c][k]) break;
                cur[k] = 0;
                ++k;
            }
            if (k == n) break;
        }
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

ModuleMap::ModuleMap(PresPtr src, PresPtr dst, std::vector<PolyVec> matrix)
    : src_(std::move(src)), dst_(std::move(dst)), matrix_(std::move(matrix)) {}

ModuleMap ModuleMap::make(PresPtr src, PresPtr dst, std::vector<PolyVec> matrix) {
    check_same_ring(src->ring(), dst->ring());
    if (matrix.size() != src->rank()) throw AlgebraError("matrix must have one row per source generator");
    for (auto& row : matrix) {
        if (row.size() != dst->rank()) throw AlgebraError("matrix row has wrong target rank");
        row = dst->nf(row);
    }
    ModuleMap m(std::move(src), std::move(dst), std::move(matrix));
    // well-definedness: source relations must land in the target relations
    for (const auto& r : m.src_->relations()) {
        PolyVec img = zero_vec(m.dst_->ring(), m.dst_->rank());
        for (std::size_t i = 0; i < m.src_->rank(); ++i)
            img = vec_add(img, vec_scale(m.matrix_[i], r[i]));
        if (!m.dst_->is_zero_elem(img))
            throw AlgebraError("module map not well-defined: relation " + vec_to_string(r) +
                               " maps to nonzero " + vec_to_string(m.dst_->nf(img)));
    }
    return m;
}

ModuleMap ModuleMap::identity(PresPtr m) {
    std::vector<PolyVec> mat;
    for (std::size_t i = 0; i < m->rank(); ++i) mat.push_back(unit_vec(m->ring(), m->rank(), i));
    PresPtr copy = m;
    return make(std::move(m), std::move(copy), std::move(mat));
}

ModuleMap ModuleMap::zero(PresPtr src, PresPtr dst) {
    std::vector<PolyVec> mat(src->rank(), zero_vec(dst->ring(), dst->rank()));
    return make(std::move(src), std::move(dst), std::move(mat));
}

ModuleMap ModuleMap::multiplication(PresPtr m, const Polynomial& f) {
    std::vector<PolyVec> mat;
    for (std::size_t i = 0; i < m->rank(); ++i) {
        PolyVec v = zero_vec(m->ring(), m->rank());
        v[i] = f;
        mat.push_back(std::move(v));
    }
    PresPtr copy = m;
    return make(std::move(m), std::move(copy), std::move(mat));
}

ModuleMap ModuleMap::compose(const ModuleMap& g, const ModuleMap& f) {
    bool same = f.dst_.get() == g.src_.get() ||
                (f.dst_->ring()->same_ring(*g.src_->ring()) &&
                 f.dst_->rank() == g.src_->rank() &&
                 f.dst_->relation_gb().same_submodule(g.src_->relation_gb()));
    if (!same) throw AlgebraError("maps not composable");
    std::vector<PolyVec> mat;
    for (std::size_t i = 0; i < f.src_->rank(); ++i) mat.push_back(g.apply(f.matrix_[i]));
    return make(f.src_, g.dst_, std::move(mat));
}

PolyVec ModuleMap::apply(const PolyVec& v) const {
    if (v.size() != src_->rank()) throw AlgebraError("element has wrong ambient rank");
    PolyVec img = zero_vec(dst_->ring(), dst_->rank());
    for (std::size_t i = 0; i < src_->rank(); ++i)
        img = vec_add(img, vec_scale(matrix_[i], v[i]));
    return dst_->nf(img);
}

bool ModuleMap::is_zero_map() const {
    for (const auto& row : matrix_)
        if (!dst_->is_zero_elem(row)) return false;
    return true;
}

KernelResult ModuleMap::kernel() const {
    const RingPtr& ring = src_->ring();
    const std::size_t s = src_->rank();
    // syzygies of [images | target relations]; first block gives kernel gens
    std::vector<PolyVec> gens = matrix_;
    for (const auto& r : dst_->relations()) gens.push_back(r);
    SubmoduleGB syzgb(ring, dst_->rank(), gens, SubmoduleGB::Track::Tags);
    std::vector<PolyVec> kgens;
    for (const auto& syz : syzgb.syzygies()) {
        PolyVec k(syz.begin(), syz.begin() + static_cast<std::ptrdiff_t>(s));
        k = src_->nf(k);
        if (!vec_is_zero(k)) kgens.push_back(std::move(k));
    }
    // relations of the kernel: syzygies of [kernel gens | source relations]
    std::vector<PolyVec> kg_and_rels = kgens;
    for (const auto& r : src_->relations()) kg_and_rels.push_back(r);
    SubmoduleGB relsyz(ring, s, kg_and_rels, SubmoduleGB::Track::Tags);
    std::vector<PolyVec> krels;
    for (const auto& syz : relsyz.syzygies()) {
        PolyVec r(syz.begin(), syz.begin() + static_cast<std::ptrdiff_t>(kgens.size()));
        if (!vec_is_zero(r)) krels.push_back(std::move(r));
    }
    PresPtr ker = ModulePresentation::make(ring, kgens.size(), std::move(krels));
    ModuleMap incl = kgens.empty() ? ModuleMap(ker, src_, {})
                                   : ModuleMap::make(ker, src_, kgens);
    return KernelResult{std::move(ker), std::move(incl), kgens};
}

CokernelResult ModuleMap::cokernel() const {
    std::vector<PolyVec> rels = dst_->relations();
    for (const auto& row : matrix_)
        if (!vec_is_zero(row)) rels.push_back(row);
    PresPtr cok = ModulePresentation::make(dst_->ring(), dst_->rank(), std::move(rels));
    std::vector<PolyVec> mat;
    for (std::size_t i = 0; i < dst_->rank(); ++i)
        mat.push_back(unit_vec(dst_->ring(), dst_->rank(), i));
    ModuleMap proj = ModuleMap::make(dst_, cok, std::move(mat));
    return CokernelResult{std::move(cok), std::move(proj)};
}

// ---------------------------------------------------------------------------
// ideals

std::vector<Polynomial> ideal_groebner(const RingPtr& ring, std::vector<Polynomial> gens) {
    std::vector<PolyVec> vgens;
    for (auto& g : gens) vgens.push_back({std::move(g)});
    auto gb = reduced_groebner(ring, 1, std::move(vgens));
    std::vector<Polynomial> out;
    for (auto& v : gb) out.push_back(std::move(v[0]));
    return out;
}

bool ideal_contains(const RingPtr& ring, const std::vector<Polynomial>& gens,
                    const Polynomial& f) {
    std::vector<PolyVec> vgens;
    for (const auto& g : gens) vgens.push_back({g});
    SubmoduleGB gb(ring, 1, vgens);
    return gb.contains({f});
}

std::vector<Polynomial> quotient_ideal(const RingPtr& ring, std::size_t rank,
                                       const std::vector<PolyVec>& sub, const PolyVec& v) {
    std::vector<PolyVec> gens;
    gens.push_back(v);
    for (const auto& u : sub) gens.push_back(u);
    SubmoduleGB gb(ring, rank, gens, SubmoduleGB::Track::Tags);
    std::vector<Polynomial> out;
    for (const auto& syz : gb.syzygies())
        if (!syz[0].is_zero()) out.push_back(syz[0]);
    return ideal_groebner(ring, std::move(out));
}

std::vector<Polynomial> intersect_ideals(const RingPtr& ring,
                                         const std::vector<Polynomial>& a,
                                         const std::vector<Polynomial>& b) {
    if (a.empty() || b.empty()) return {};
    // I cap J = kernel of R -> R/I (+) R/J
    std::vector<PolyVec> rels;
    for (const auto& f : a) rels.push_back({f, Polynomial::zero(ring)});
    for (const auto& g : b) rels.push_back({Polynomial::zero(ring), g});
    PresPtr target = ModulePresentation::make(ring, 2, std::move(rels));
    PresPtr source = ModulePresentation::free_module(ring, 1);
    Polynomial one = Polynomial::constant(ring, 1);
    ModuleMap diag = ModuleMap::make(source, target, {{one, one}});
    KernelResult k = diag.kernel();
    std::vector<Polynomial> out;
    for (const auto& g : k.gens_in_source) out.push_back(g[0]);
    return ideal_groebner(ring, std::move(out));
}

std::vector<Polynomial> annihilator(const ModulePresentation& m) {
    const RingPtr& ring = m.ring();
    if (m.rank() == 0) return {Polynomial::constant(ring, 1)};
    const auto& rel_basis = m.relation_gb().basis();
    std::vector<Polynomial> acc;
    bool first = true;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        auto quot = quotient_ideal(ring, m.rank(), rel_basis, unit_vec(ring, m.rank(), i));
        acc = first ? quot : intersect_ideals(ring, acc, quot);
        first = false;
        if (acc.empty()) return {}; // zero ideal absorbs the intersection
    }
    return ideal_groebner(ring, std::move(acc));
}

Containment support_contained(const RingPtr& ring, const std::vector<Polynomial>& a,
                              const std::vector<Polynomial>& b, int power_cap) {
    std::vector<PolyVec> vgens;
    for (const auto& g : a) vgens.push_back({g});
    SubmoduleGB agb(ring, 1, vgens);
    for (const auto& f : b) {
        check_same_ring(f.ring(), ring);
        PolyVec pw = agb.reduce({f});
        bool in = vec_is_zero(pw);
        for (int k = 1; !in && k < power_cap; ++k) {
            pw = agb.reduce({pw[0] * f});
            in = vec_is_zero(pw);
        }
        if (!in) return Containment::Undecided;
    }
    return Containment::Contained;
}

} // namespace cartier

#include "cartier/geom.hpp"

#include <algorithm>
#include <sstream>

namespace cartier {

CMPtr dualizing_cartier(const RingPtr& ring) {
    const std::uint64_t q = ring->fq().q();
    PresPtr pres = ModulePresentation::free_module(ring, 1);
    KappaTable table;
    Exponents top(ring->nvars(), static_cast<std::uint32_t>(q - 1));
    table.emplace(KappaKey{0, std::move(top)}, unit_vec(ring, 1, 0));
    return CartierModule::make(std::move(pres), std::move(table));
}

// ---------------------------------------------------------------------------
// Hom-Koszul shriek

namespace {

// subsets of {0..t-1} of size k, ordered by bitmask
std::vector<std::uint32_t> subsets_of_size(int t, int k) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (1u << t); ++mask)
        if (__builtin_popcount(mask) == k) out.push_back(mask);
    return out;
}

int koszul_sign(std::uint32_t set, int i) {
    int below = __builtin_popcount(set & ((1u << i) - 1u));
    return below % 2 == 0 ? 1 : -1;
}

} // namespace

CartierComplex shriek_regular_sequence(const CMPtr& m, const std::vector<Polynomial>& gs) {
    const RingPtr& ring = m->ring();
    const int t = static_cast<int>(gs.size());
    if (t == 0) throw AlgebraError("shriek needs at least one polynomial");
    if (t > 20) throw AlgebraError("regular sequence too long");
    for (const auto& g : gs) check_same_ring(g.ring(), ring);
    const std::uint64_t q = ring->fq().q();
    const std::size_t r = m->rank();

    CartierComplex cx;
    cx.length = t;

    std::vector<std::vector<std::uint32_t>> blocks(static_cast<std::size_t>(t) + 1);
    for (int k = 0; k <= t; ++k) blocks[static_cast<std::size_t>(k)] = subsets_of_size(t, k);

    auto product_of = [&](std::uint32_t set) {
        Polynomial prod = Polynomial::constant(ring, 1);
        for (int i = 0; i < t; ++i)
            if (set & (1u << i)) prod = prod * gs[static_cast<std::size_t>(i)];
        return prod;
    };

    // terms: K^k = (+)_{|S|=k} M e_S, structural twist (prod_S g)^{q-1} per block
    for (int k = 0; k <= t; ++k) {
        const auto& bl = blocks[static_cast<std::size_t>(k)];
        std::size_t rank = bl.size() * r;
        std::vector<PolyVec> rels;
        for (std::size_t b = 0; b < bl.size(); ++b) {
            for (const auto& rel : m->pres()->relations()) {
                PolyVec padded = zero_vec(ring, rank);
                for (std::size_t a = 0; a < r; ++a) padded[b * r + a] = rel[a];
                rels.push_back(std::move(padded));
            }
        }
        PresPtr pres = ModulePresentation::make(ring, rank, std::move(rels));
        KappaTable table;
        for (std::size_t b = 0; b < bl.size(); ++b) {
            Polynomial twist = product_of(bl[b]).pow(q - 1);
            for (std::size_t a = 0; a < r; ++a) {
                for_each_digit(ring->nvars(), q, [&](const Exponents& d) {
                    PolyVec arg = zero_vec(ring, r);
                    arg[a] = twist.times_monomial(d, 1);
                    PolyVec val = m->kappa(arg);
                    if (vec_is_zero(val)) return;
                    PolyVec padded = zero_vec(ring, rank);
                    for (std::size_t c = 0; c < r; ++c) padded[b * r + c] = val[c];
                    table.emplace(KappaKey{b * r + a, d}, std::move(padded));
                });
            }
        }
        cx.terms.emplace(k, CartierModule::make(std::move(pres), std::move(table)));
    }

    // differentials d(m e_S) = sum_{i not in S} sign(i,S) g_i m e_{S+i}
    for (int k = 0; k < t; ++k) {
        const auto& src_bl = blocks[static_cast<std::size_t>(k)];
        const auto& dst_bl = blocks[static_cast<std::size_t>(k) + 1];
        const CMPtr& src = cx.terms.at(k);
        const CMPtr& dst = cx.terms.at(k + 1);
        std::vector<PolyVec> mat;
        for (std::size_t b = 0; b < src_bl.size(); ++b) {
            for (std::size_t a = 0; a < r; ++a) {
                PolyVec img = zero_vec(ring, dst->rank());
                for (int i = 0; i < t; ++i) {
                    if (src_bl[b] & (1u << i)) continue;
                    std::uint32_t target_set = src_bl[b] | (1u << i);
                    std::size_t bb = static_cast<std::size_t>(
                        std::find(dst_bl.begin(), dst_bl.end(), target_set) - dst_bl.begin());
                    Polynomial val = gs[static_cast<std::size_t>(i)];
                    if (koszul_sign(src_bl[b], i) < 0) val = -val;
                    img[bb * r + a] = img[bb * r + a] + val;
                }
                mat.push_back(std::move(img));
            }
        }
        ModuleMap dmap = ModuleMap::make(src->pres(), dst->pres(), std::move(mat));
        cx.differentials.emplace(k, CartierMorphism::make(src, dst, std::move(dmap)));
    }

    // cohomology H^k = ker d^k / im d^{k-1}, with restricted/pushed structures
    for (int k = 0; k <= t; ++k) {
        const CMPtr& term = cx.terms.at(k);
        CMPtr zmod; // cycles, as a Cartier module of its own
        std::vector<PolyVec> zgens_in_term;
        if (k < t) {
            KernelResult ker = cx.differentials.at(k).map().kernel();
            CartierSub sub = cartier_submodule(term, ker.gens_in_source);
            zmod = sub.module;
            zgens_in_term = sub.gens_in_parent;
        } else {
            zmod = term;
            for (std::size_t i = 0; i < term->rank(); ++i)
                zgens_in_term.push_back(unit_vec(ring, term->rank(), i));
        }
        if (k == 0) {
            cx.cohomology.emplace(k, zmod);
            continue;
        }
        // boundaries, expressed in the cycle generators
        std::vector<PolyVec> lift_gens = zgens_in_term;
        for (const auto& rel : term->pres()->relations()) lift_gens.push_back(rel);
        SubmoduleGB lift_basis(ring, term->rank(), lift_gens, SubmoduleGB::Track::Tags);
        std::vector<PolyVec> new_rels = zmod->pres()->relations();
        for (const auto& row : cx.differentials.at(k - 1).map().matrix()) {
            if (term->pres()->is_zero_elem(row)) continue;
            auto coeffs = lift_basis.lift(term->pres()->nf(row));
            if (!coeffs) throw AlgebraError("boundary does not lie among cycles (d^2 != 0?)");
            PolyVec rel(coeffs->begin(),
                        coeffs->begin() + static_cast<std::ptrdiff_t>(zgens_in_term.size()));
            if (!vec_is_zero(rel)) new_rels.push_back(std::move(rel));
        }
        PresPtr hpres = ModulePresentation::make(ring, zmod->rank(), std::move(new_rels));
        KappaTable htable;
        for (const auto& [key, value] : zmod->table()) {
            PolyVec v = hpres->nf(value);
            if (!vec_is_zero(v)) htable.emplace(key, std::move(v));
        }
        cx.cohomology.emplace(k, CartierModule::make(std::move(hpres), std::move(htable)));
    }
    return cx;
}

CartierComplex stalk_closed_point(const CMPtr& m, const std::vector<Polynomial>& point) {
    if (point.size() != m->ring()->nvars())
        throw AlgebraError("closed point needs as many generators as variables");
    return shriek_regular_sequence(m, point);
}

// ---------------------------------------------------------------------------
// Anderson contraction

ContractionWitness pushforward_contract(const CMPtr& m, int ell_extra, int nil_cap) {
    const RingPtr& ring = m->ring();
    const std::size_t n = ring->nvars();
    const std::size_t xvar = n - 1; // distinguished last variable
    const std::uint64_t q = m->q();

    ContractionWitness w;
    for (const auto& [key, value] : m->table())
        for (const auto& p : value)
            w.degree_bound = std::max<int>(w.degree_bound,
                                           static_cast<int>(std::max<std::int64_t>(p.degree_in(xvar), 0)));
    w.ell0 = static_cast<int>((static_cast<std::uint64_t>(w.degree_bound) * q) / (q - 1));

    // membership in M_{<=d} is read off the X-degree of the normal form under
    // an X-degree-dominant order
    RingPtr xring = ring->with_order(OrderKind::LastVarElim);
    std::vector<PolyVec> xrels;
    for (const auto& rel : m->pres()->relations()) {
        PolyVec v;
        for (const auto& p : rel) v.push_back(p.to_ring(xring));
        xrels.push_back(std::move(v));
    }
    SubmoduleGB xgb(xring, m->rank(), xrels);
    auto xdeg_nf = [&](const PolyVec& v) {
        PolyVec xs;
        for (const auto& p : v) xs.push_back(p.to_ring(xring));
        PolyVec nf = xgb.reduce(xs);
        std::int64_t d = -1;
        for (const auto& p : nf) d = std::max(d, p.degree_in(xvar));
        return d;
    };

    // generators x^{d_R} X^k m_i of the sigma-pushforward of M_{<=ell}
    auto check_level = [&](int ell, int target) {
        bool ok = true;
        for (std::size_t i = 0; i < m->rank() && ok; ++i) {
            for (int k = 0; k <= ell && ok; ++k) {
                for_each_digit(n - 1, q, [&](const Exponents& dr) {
                    Exponents full(n, 0);
                    for (std::size_t j = 0; j + 1 < n; ++j) full[j] = dr[j];
                    full[xvar] = static_cast<std::uint32_t>(k);
                    PolyVec v =
                        m->kappa(vec_times_monomial(unit_vec(ring, m->rank(), i), full, 1));
                    if (xdeg_nf(v) > target) ok = false;
                });
            }
        }
        return ok;
    };

    w.n_generator_count = m->rank() * static_cast<std::size_t>(w.ell0 + 1);
    for (int k = 0; k <= w.ell0; ++k) {
        for (std::size_t i = 0; i < m->rank(); ++i) {
            Exponents ex(n, 0);
            ex[xvar] = static_cast<std::uint32_t>(k);
            PolyVec g = vec_times_monomial(unit_vec(ring, m->rank(), i), ex, 1);
            w.n_kappa.push_back(m->kappa(g));
            w.n_gens.push_back(std::move(g));
        }
    }

    bool violated = false;
    {
        bool ok = check_level(w.ell0, w.ell0); // kappa(N) subset of N
        w.checks.push_back({w.ell0, ok});
        violated |= !ok;
    }
    for (int ell = w.ell0 + 1; ell <= w.ell0 + ell_extra; ++ell) {
        bool ok = check_level(ell, ell - 1);
        w.checks.push_back({ell, ok});
        violated |= !ok;
    }
    if (violated) throw AlgebraError("contraction bound violated");

    // local nilpotence of M/N: iterate kappa on each class X^k m_i until its
    // X-degree falls to ell0 or below
    for (std::size_t i = 0; i < m->rank(); ++i) {
        for (int k = 0; k <= w.ell0 + ell_extra; ++k) {
            Exponents ex(n, 0);
            ex[xvar] = static_cast<std::uint32_t>(k);
            PolyVec v = vec_times_monomial(unit_vec(ring, m->rank(), i), ex, 1);
            int steps = 0;
            while (xdeg_nf(v) > w.ell0 && steps <= nil_cap) {
                v = m->kappa(v);
                ++steps;
            }
            if (steps > nil_cap) throw AlgebraError("contraction bound violated");
            w.reach.push_back({i, k, steps});
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// support

SupportReport crystalline_support(const CMPtr& m, int cap) {
    NilpotenceVerdict v = image_chain(*m, cap);
    SupportReport rep;
    rep.stabilization_exponent = v.stabilization_exponent;
    const RingPtr& ring = m->ring();
    if (v.nilpotent) {
        rep.ideal = {Polynomial::constant(ring, 1)};
        rep.empty = true;
        rep.variety = "empty";
        return rep;
    }
    // annihilator of the stabilized image submodule
    std::vector<Polynomial> acc;
    bool first = true;
    const auto& rel_basis = m->pres()->relation_gb().basis();
    for (const auto& g : v.stabilized_gens) {
        auto quot = quotient_ideal(ring, m->rank(), rel_basis, g);
        acc = first ? quot : intersect_ideals(ring, acc, quot);
        first = false;
        if (acc.empty()) break;
    }
    rep.ideal = ideal_groebner(ring, std::move(acc));
    bool unit = false;
    for (const auto& f : rep.ideal)
        if (f.is_constant() && !f.is_zero()) unit = true;
    rep.empty = unit;
    std::ostringstream os;
    if (unit) {
        os << "empty";
    } else if (rep.ideal.empty()) {
        os << "A^" << ring->nvars() << " (zero ideal)";
    } else {
        os << "V(";
        for (std::size_t i = 0; i < rep.ideal.size(); ++i) {
            if (i) os << ", ";
            os << rep.ideal[i].to_string();
        }
        os << ")";
    }
    rep.variety = os.str();
    return rep;
}

// ---------------------------------------------------------------------------
// localization

CMPtr restrict_basic_open(const CMPtr& m, const Polynomial& g) {
    if (g.is_zero()) throw AlgebraError("cannot localize at zero");
    const RingPtr& ring = m->ring();
    check_same_ring(g.ring(), ring);
    std::string fresh = "y";
    for (int suffix = 0; ring->var_index(fresh) >= 0; ++suffix)
        fresh = "y" + std::to_string(suffix);
    RingPtr ext = ring->extended(fresh, ring->order());
    const std::size_t n = ring->nvars();
    const std::size_t r = m->rank();
    const std::uint64_t q = m->q();

    auto promote = [&](const Polynomial& p) {
        std::vector<Term> terms;
        for (const auto& t : p.terms()) {
            Exponents e = t.exp;
            e.push_back(0);
            terms.push_back({std::move(e), t.coeff});
        }
        std::sort(terms.begin(), terms.end(),
                  [&](const Term& a, const Term& b) { return ext->cmp(a.exp, b.exp) > 0; });
        return Polynomial::from_sorted_terms(ext, std::move(terms));
    };
    auto promote_vec = [&](const PolyVec& v) {
        PolyVec out;
        for (const auto& p : v) out.push_back(promote(p));
        return out;
    };

    std::vector<PolyVec> rels;
    for (const auto& rel : m->pres()->relations()) rels.push_back(promote_vec(rel));
    Polynomial yg_minus_1 =
        Polynomial::variable(ext, n) * promote(g) - Polynomial::constant(ext, 1);
    for (std::size_t j = 0; j < r; ++j) {
        PolyVec v = zero_vec(ext, r);
        v[j] = yg_minus_1;
        rels.push_back(std::move(v));
    }
    PresPtr pres = ModulePresentation::make(ext, r, std::move(rels));

    // kappa(x^d y^dy g_j) = y^dy kappa(x^d g^{dy(q-1)} g_j)
    KappaTable table;
    for (std::size_t j = 0; j < r; ++j) {
        for_each_digit(n + 1, q, [&](const Exponents& full) {
            Exponents base(full.begin(), full.end() - 1);
            std::uint32_t dy = full.back();
            PolyVec arg = zero_vec(ring, r);
            arg[j] = g.pow(static_cast<std::uint64_t>(dy) * (q - 1)).times_monomial(base, 1);
            PolyVec val = m->kappa(arg);
            if (vec_is_zero(val)) return;
            Exponents ypow(n + 1, 0);
            ypow[n] = dy;
            PolyVec lifted = vec_times_monomial(promote_vec(val), ypow, 1);
            lifted = pres->nf(lifted);
            if (!vec_is_zero(lifted)) table.emplace(KappaKey{j, full}, std::move(lifted));
        });
    }
    return CartierModule::make(std::move(pres), std::move(table));
}

// ---------------------------------------------------------------------------
// Kashiwara verification

KashiwaraReport verify_kashiwara(const CMPtr& m, const Polynomial& f, int npower, int cap) {
    const RingPtr& ring = m->ring();
    check_same_ring(f.ring(), ring);
    if (npower < 1) throw AlgebraError("power must be >= 1");
    Polynomial fn = f.pow(static_cast<std::uint64_t>(npower));
    for (std::size_t i = 0; i < m->rank(); ++i) {
        PolyVec v = zero_vec(ring, m->rank());
        v[i] = fn;
        if (!m->pres()->is_zero_elem(v)) throw AlgebraError("not supported on V(f)");
    }

    KashiwaraReport rep;
    // (i) M[f] -> M is a nil-isomorphism; its kernel is zero, so only the
    // cokernel M/M[f] needs testing
    KernelResult torsion = ModuleMap::multiplication(m->pres(), f).kernel();
    std::vector<PolyVec> rels = m->pres()->relations();
    for (const auto& gen : torsion.gens_in_source) rels.push_back(gen);
    PresPtr cok_pres = ModulePresentation::make(ring, m->rank(), std::move(rels));
    KappaTable cok_table;
    for (const auto& [key, value] : m->table()) {
        PolyVec v = cok_pres->nf(value);
        if (!vec_is_zero(v)) cok_table.emplace(key, std::move(v));
    }
    CMPtr cok = CartierModule::make(std::move(cok_pres), std::move(cok_table));
    rep.cokernel_verdict = is_nilpotent(*cok, cap);
    rep.inclusion_nil_iso = rep.cokernel_verdict.nilpotent;

    // (ii) H^1 of the hypersurface shriek: M/fM with kappa(f^{q-1} . -)
    const std::uint64_t q = m->q();
    std::vector<PolyVec> h1_rels = m->pres()->relations();
    for (std::size_t j = 0; j < m->rank(); ++j) {
        PolyVec v = zero_vec(ring, m->rank());
        v[j] = f;
        h1_rels.push_back(std::move(v));
    }
    PresPtr h1_pres = ModulePresentation::make(ring, m->rank(), std::move(h1_rels));
    Polynomial twist = f.pow(q - 1);
    KappaTable h1_table;
    for (std::size_t j = 0; j < m->rank(); ++j) {
        for_each_digit(ring->nvars(), q, [&](const Exponents& d) {
            PolyVec arg = zero_vec(ring, m->rank());
            arg[j] = twist.times_monomial(d, 1);
            PolyVec val = h1_pres->nf(m->kappa(arg));
            if (!vec_is_zero(val)) h1_table.emplace(KappaKey{j, d}, std::move(val));
        });
    }
    CMPtr h1 = CartierModule::make(std::move(h1_pres), std::move(h1_table));
    rep.h1_verdict = is_nilpotent(*h1, cap);
    rep.h1_nilpotent = rep.h1_verdict.nilpotent;
    return rep;
}

// ---------------------------------------------------------------------------
// pointwise nilpotence over A^1

std::vector<Polynomial> monic_irreducibles(const RingPtr& ring, int max_degree) {
    if (ring->nvars() != 1) throw AlgebraError("irreducible enumeration needs a univariate ring");
    const Fq& F = ring->fq();
    const std::uint64_t q = F.q();
    std::vector<Polynomial> out;
    std::vector<std::vector<Polynomial>> by_degree(static_cast<std::size_t>(max_degree) + 1);
    for (int deg = 1; deg <= max_degree; ++deg) {
        double count = 1;
        for (int i = 0; i < deg; ++i) count *= static_cast<double>(q);
        if (count > double(1 << 22)) throw AlgebraError("too many candidate points");
        std::uint64_t total = 1;
        for (int i = 0; i < deg; ++i) total *= q;
        for (std::uint64_t c = 0; c < total; ++c) {
            // coefficients c_0..c_{deg-1} from the base-q digits of c
            Polynomial cand = Polynomial::variable(ring, 0, static_cast<std::uint32_t>(deg));
            std::uint64_t v = c;
            for (int i = 0; i < deg; ++i) {
                Fq::Elem coeff = F.element_at(v % q);
                v /= q;
                if (coeff != 0)
                    cand = cand + Polynomial::monomial(
                                      ring, Exponents{static_cast<std::uint32_t>(i)}, coeff);
            }
            bool irred = true;
            for (int d = 1; irred && 2 * d <= deg; ++d) {
                for (const auto& p : by_degree[static_cast<std::size_t>(d)]) {
                    // remainder of cand by p via the ideal membership test
                    if (ideal_contains(ring, {p}, cand)) {
                        irred = false;
                        break;
                    }
                }
            }
            if (irred) {
                by_degree[static_cast<std::size_t>(deg)].push_back(cand);
                out.push_back(cand);
            }
        }
    }
    return out;
}

PointwiseReport pointwise_nilpotence(const CMPtr& m, int degree_bound, int chain_cap,
                                     int power_cap) {
    if (m->ring()->nvars() != 1)
        throw AlgebraError("pointwise nilpotence needs a univariate ambient ring");
    PointwiseReport rep;
    rep.support = crystalline_support(m, chain_cap);
    for (const auto& pi : monic_irreducibles(m->ring(), degree_bound)) {
        PointReport pr;
        pr.point = pi;
        CartierComplex stalk = stalk_closed_point(m, {pi});
        for (const auto& [deg, h] : stalk.cohomology) {
            StalkDegreeInfo info;
            auto basis = h->pres()->fq_basis();
            if (basis) info.dim = basis->size();
            NilpotenceVerdict v = is_nilpotent(*h, chain_cap);
            info.nilpotent = v.nilpotent;
            info.order = v.order;
            if (!v.nilpotent) pr.non_nilpotent = true;
            if (info.dim && *info.dim == 0) continue; // omit zero cohomology
            pr.degrees.emplace(deg, std::move(info));
        }
        if (pr.non_nilpotent) {
            // V(pi) must lie inside V(support ideal)
            pr.in_support = support_contained(m->ring(), {pi}, rep.support.ideal, power_cap);
            if (pr.in_support != Containment::Contained) rep.all_non_nilpotent_in_support = false;
        }
        rep.points.push_back(std::move(pr));
    }
    return rep;
}

} // namespace cartier

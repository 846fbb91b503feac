#include "cartier/submodule.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace cartier {

PolyVec zero_vec(const RingPtr& ring, std::size_t rank) {
    return PolyVec(rank, Polynomial::zero(ring));
}

PolyVec unit_vec(const RingPtr& ring, std::size_t rank, std::size_t comp) {
    PolyVec v = zero_vec(ring, rank);
    v[comp] = Polynomial::constant(ring, 1);
    return v;
}

bool vec_is_zero(const PolyVec& v) {
    for (const auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

PolyVec vec_add(const PolyVec& a, const PolyVec& b) {
    PolyVec out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
    return out;
}

PolyVec vec_sub(const PolyVec& a, const PolyVec& b) {
    PolyVec out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

PolyVec vec_neg(const PolyVec& a) {
    PolyVec out;
    out.reserve(a.size());
    for (const auto& p : a) out.push_back(-p);
    return out;
}

PolyVec vec_scale(const PolyVec& a, const Polynomial& f) {
    PolyVec out;
    out.reserve(a.size());
    for (const auto& p : a) out.push_back(p * f);
    return out;
}

PolyVec vec_times_monomial(const PolyVec& a, const Exponents& exp, Fq::Elem c) {
    PolyVec out;
    out.reserve(a.size());
    for (const auto& p : a) out.push_back(p.times_monomial(exp, c));
    return out;
}

bool vec_equal(const PolyVec& a, const PolyVec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

std::string vec_to_string(const PolyVec& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].to_string();
    }
    os << "]";
    return os.str();
}

std::optional<VecTerm> leading_vec_term(const PolyVec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_zero()) {
            const Term& t = v[i].leading_term();
            return VecTerm{i, t.exp, t.coeff};
        }
    }
    return std::nullopt;
}

bool exp_divides(const Exponents& a, const Exponents& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Exponents exp_sub(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Exponents exp_lcm(const Exponents& a, const Exponents& b) {
    Exponents out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

namespace {

// POT compare of two leading terms; >0 when a > b
int cmp_vec_term(const RingPtr& ring, const VecTerm& a, const VecTerm& b) {
    if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
    return ring->cmp(a.exp, b.exp);
}

// subtract c * x^shift * g from v
void reduce_step(PolyVec& v, const PolyVec& g, const Exponents& shift, Fq::Elem c) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (g[i].is_zero()) continue;
        v[i] = v[i] - g[i].times_monomial(shift, c);
    }
}

struct LeadInfo {
    std::size_t comp;
    Exponents exp;
    Fq::Elem coeff;
};

LeadInfo lead_of(const PolyVec& g) {
    auto lt = leading_vec_term(g);
    return LeadInfo{lt->comp, lt->exp, lt->coeff};
}

} // namespace

PolyVec normal_form(const RingPtr& ring, PolyVec v, const std::vector<PolyVec>& basis) {
    const Fq& F = ring->fq();
    std::vector<LeadInfo> leads;
    leads.reserve(basis.size());
    for (const auto& g : basis) leads.push_back(lead_of(g));

    PolyVec rem = zero_vec(ring, v.size());
    while (true) {
        auto lt = leading_vec_term(v);
        if (!lt) break;
        bool reduced = false;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (leads[k].comp != lt->comp) continue;
            if (!exp_divides(leads[k].exp, lt->exp)) continue;
            Fq::Elem c = F.div(lt->coeff, leads[k].coeff);
            reduce_step(v, basis[k], exp_sub(lt->exp, leads[k].exp), c);
            reduced = true;
            break;
        }
        if (!reduced) {
            // move the leading term to the remainder and keep going
            rem[lt->comp] = rem[lt->comp] + Polynomial::monomial(ring, lt->exp, lt->coeff);
            v[lt->comp] = v[lt->comp] - Polynomial::monomial(ring, lt->exp, lt->coeff);
        }
    }
    return rem;
}

namespace {

std::vector<PolyVec> buchberger(const RingPtr& ring, std::size_t rank,
                                std::vector<PolyVec> gens) {
    const Fq& F = ring->fq();
    std::vector<PolyVec> basis;
    for (auto& g : gens) {
        if (g.size() != rank) throw AlgebraError("generator has wrong ambient rank");
        if (!vec_is_zero(g)) basis.push_back(std::move(g));
    }
    std::deque<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);

    while (!pairs.empty()) {
        auto [i, j] = pairs.front();
        pairs.pop_front();
        LeadInfo li = lead_of(basis[i]);
        LeadInfo lj = lead_of(basis[j]);
        if (li.comp != lj.comp) continue;
        Exponents gamma = exp_lcm(li.exp, lj.exp);
        // S-vector: cancel leading terms
        PolyVec s = vec_times_monomial(basis[i], exp_sub(gamma, li.exp), F.inv(li.coeff));
        PolyVec t = vec_times_monomial(basis[j], exp_sub(gamma, lj.exp), F.inv(lj.coeff));
        PolyVec r = normal_form(ring, vec_sub(s, t), basis);
        if (!vec_is_zero(r)) {
            basis.push_back(std::move(r));
            std::size_t n = basis.size() - 1;
            for (std::size_t k = 0; k < n; ++k) pairs.emplace_back(k, n);
        }
    }
    return basis;
}

std::vector<PolyVec> reduce_basis(const RingPtr& ring, std::vector<PolyVec> basis) {
    const Fq& F = ring->fq();
    // minimal: drop any element whose lead is divisible by another's lead
    std::vector<bool> keep(basis.size(), true);
    std::vector<LeadInfo> leads;
    leads.reserve(basis.size());
    for (const auto& g : basis) leads.push_back(lead_of(g));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!keep[i]) continue;
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j || !keep[j]) continue;
            if (leads[j].comp == leads[i].comp && exp_divides(leads[j].exp, leads[i].exp)) {
                // equal leads: keep the earlier one
                if (leads[j].exp == leads[i].exp && j > i) continue;
                keep[i] = false;
                break;
            }
        }
    }
    std::vector<PolyVec> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) minimal.push_back(std::move(basis[i]));

    // monic + tail-reduce each against the others
    std::vector<PolyVec> out;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<PolyVec> others;
        others.reserve(minimal.size() - 1);
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        PolyVec r = normal_form(ring, minimal[i], others);
        if (vec_is_zero(r)) continue; // redundant generator
        LeadInfo l = lead_of(r);
        if (l.coeff != 1) {
            Fq::Elem inv = F.inv(l.coeff);
            for (auto& p : r) p = p.scaled(inv);
        }
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [&](const PolyVec& a, const PolyVec& b) {
        LeadInfo la = lead_of(a), lb = lead_of(b);
        return cmp_vec_term(ring, VecTerm{la.comp, la.exp, la.coeff},
                            VecTerm{lb.comp, lb.exp, lb.coeff}) > 0;
    });
    return out;
}

} // namespace

std::vector<PolyVec> reduced_groebner(const RingPtr& ring, std::size_t rank,
                                      std::vector<PolyVec> gens) {
    return reduce_basis(ring, buchberger(ring, rank, std::move(gens)));
}

SubmoduleGB::SubmoduleGB(RingPtr ring, std::size_t rank, std::vector<PolyVec> gens, Track track)
    : ring_(std::move(ring)), rank_(rank), ngens_(gens.size()), track_(track) {
    for (const auto& g : gens) {
        if (g.size() != rank_) throw AlgebraError("generator has wrong ambient rank");
        for (const auto& p : g) check_same_ring(p.ring(), ring_);
    }
    if (track_ == Track::None) {
        gb_ = reduced_groebner(ring_, rank_, std::move(gens));
        return;
    }
    // augment each generator with a tag unit vector; head components dominate
    std::vector<PolyVec> aug;
    aug.reserve(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        PolyVec w = gens[i];
        w.resize(rank_ + ngens_, Polynomial::zero(ring_));
        w[rank_ + i] = Polynomial::constant(ring_, 1);
        aug.push_back(std::move(w));
    }
    aug_gb_ = reduced_groebner(ring_, rank_ + ngens_, std::move(aug));
    for (const auto& w : aug_gb_) {
        bool head_zero = true;
        for (std::size_t i = 0; i < rank_; ++i)
            if (!w[i].is_zero()) head_zero = false;
        if (head_zero) {
            syz_.push_back(PolyVec(w.begin() + static_cast<std::ptrdiff_t>(rank_), w.end()));
        } else {
            gb_.push_back(PolyVec(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rank_)));
        }
    }
}

PolyVec SubmoduleGB::reduce(const PolyVec& v) const {
    if (v.size() != rank_) throw AlgebraError("element has wrong ambient rank");
    return normal_form(ring_, v, gb_);
}

bool SubmoduleGB::contains(const PolyVec& v) const { return vec_is_zero(reduce(v)); }

bool SubmoduleGB::same_submodule(const SubmoduleGB& other) const {
    if (rank_ != other.rank_ || gb_.size() != other.gb_.size()) return false;
    for (std::size_t i = 0; i < gb_.size(); ++i)
        if (!vec_equal(gb_[i], other.gb_[i])) return false;
    return true;
}

const std::vector<PolyVec>& SubmoduleGB::syzygies() const {
    if (track_ != Track::Tags) throw AlgebraError("syzygies require tag tracking");
    return syz_;
}

std::optional<std::vector<Polynomial>> SubmoduleGB::lift(const PolyVec& v) const {
    if (track_ != Track::Tags) throw AlgebraError("lift requires tag tracking");
    if (v.size() != rank_) throw AlgebraError("element has wrong ambient rank");
    PolyVec w = v;
    w.resize(rank_ + ngens_, Polynomial::zero(ring_));
    PolyVec rem = normal_form(ring_, std::move(w), aug_gb_);
    for (std::size_t i = 0; i < rank_; ++i)
        if (!rem[i].is_zero()) return std::nullopt;
    std::vector<Polynomial> coeffs;
    coeffs.reserve(ngens_);
    for (std::size_t i = 0; i < ngens_; ++i) coeffs.push_back(-rem[rank_ + i]);
    return coeffs;
}

} // namespace cartier

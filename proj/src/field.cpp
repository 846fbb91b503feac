#include "cartier/field.hpp"

#include <algorithm>
#include <sstream>

namespace cartier {

namespace {

constexpr std::uint64_t kMaxQ = std::uint64_t(1) << 40;
constexpr std::uint64_t kMaxValidationWork = 2'000'000;

// dense univariate arithmetic over F_p, used only for modulus validation
using PPoly = std::vector<std::uint64_t>; // coefficients, low to high, no trailing zeros

void ptrim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// remainder of a by monic-after-normalization b
PPoly pmod(PPoly a, const PPoly& b, std::uint64_t p) {
    ptrim(a);
    const std::size_t db = b.size() - 1;
    // make b monic
    std::uint64_t lc = b.back();
    std::uint64_t lcinv = 1;
    if (lc != 1) {
        // Fermat inverse mod p
        std::uint64_t r = 1, base = lc, n = p - 2;
        while (n) {
            if (n & 1) r = r * base % p;
            base = base * base % p;
            n >>= 1;
        }
        lcinv = r;
    }
    while (a.size() > db) {
        std::uint64_t c = a.back() * lcinv % p;
        std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            std::uint64_t sub = c * b[i] % p;
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        ptrim(a);
        if (a.empty()) break;
    }
    return a;
}

bool divides(const PPoly& d, const PPoly& f, std::uint64_t p) {
    return pmod(f, d, p).empty();
}

// brute-force irreducibility: no monic factor of degree 1..e/2
bool irreducible_bruteforce(const PPoly& f, std::uint64_t p) {
    const std::size_t e = f.size() - 1;
    if (e == 1) return true;
    for (std::size_t d = 1; 2 * d <= e; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t c = 0; c < count; ++c) {
            PPoly cand(d + 1, 0);
            std::uint64_t v = c;
            for (std::size_t i = 0; i < d; ++i) {
                cand[i] = v % p;
                v /= p;
            }
            cand[d] = 1;
            if (divides(cand, f, p)) return false;
        }
    }
    return true;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> Fq::default_modulus(std::uint64_t p, unsigned e) {
    if (e == 1) return {0, 1}; // t
    std::uint64_t count = 1;
    for (unsigned i = 0; i < e; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
        PPoly cand(e + 1, 0);
        std::uint64_t v = c;
        for (unsigned i = 0; i < e; ++i) {
            cand[i] = v % p;
            v /= p;
        }
        cand[e] = 1;
        if (irreducible_bruteforce(cand, p)) return cand;
    }
    throw AlgebraError("no irreducible modulus found"); // unreachable for prime p
}

FieldPtr Fq::make(std::uint64_t p, unsigned e) {
    return make(p, e, default_modulus(p, e));
}

FieldPtr Fq::make(std::uint64_t p, unsigned e, std::vector<std::uint64_t> modulus) {
    return FieldPtr(new Fq(p, e, std::move(modulus)));
}

Fq::Fq(std::uint64_t p, unsigned e, std::vector<std::uint64_t> modulus)
    : p_(p), e_(e), modulus_(std::move(modulus)) {
    if (!is_prime_u64(p_)) throw AlgebraError("field characteristic must be prime");
    if (e_ < 1 || e_ > 8) throw AlgebraError("field degree e must be in [1, 8]");
    q_ = 1;
    for (unsigned i = 0; i < e_; ++i) {
        if (q_ > kMaxQ / p_) throw AlgebraError("field too large (q must fit desk scale)");
        q_ *= p_;
    }
    if (modulus_.size() != e_ + 1) throw AlgebraError("modulus must have degree e");
    for (auto& c : modulus_) c %= p_;
    if (modulus_.back() != 1) throw AlgebraError("modulus must be monic");
    if (e_ >= 2) {
        std::uint64_t work = 1;
        for (unsigned i = 0; i < (e_ + 1) / 2; ++i) {
            work *= p_;
            if (work > kMaxValidationWork)
                throw AlgebraError("field too large to validate modulus irreducibility");
        }
        if (!irreducible_bruteforce(modulus_, p_))
            throw AlgebraError("modulus is not irreducible over F_p");
    }
    if (e_ >= 2) {
        // t^e = -(m_0 + ... + m_{e-1} t^{e-1}); iterate up to t^{2e-2}
        std::vector<std::uint64_t> cur(e_, 0);
        for (unsigned i = 0; i < e_; ++i) cur[i] = (p_ - modulus_[i]) % p_;
        red_.push_back(cur);
        for (unsigned k = 1; k + 1 < e_; ++k) {
            std::vector<std::uint64_t> next(e_, 0);
            // multiply by t, reduce
            std::uint64_t top = cur[e_ - 1];
            for (unsigned i = e_ - 1; i > 0; --i) next[i] = cur[i - 1];
            next[0] = 0;
            for (unsigned i = 0; i < e_; ++i) next[i] = (next[i] + top * red_[0][i]) % p_;
            red_.push_back(next);
            cur = next;
        }
    }
}

bool Fq::same_field(const Fq& o) const {
    return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
}

void Fq::decode(Elem a, std::uint64_t* digits) const {
    for (unsigned i = 0; i < e_; ++i) {
        digits[i] = a % p_;
        a /= p_;
    }
}

Fq::Elem Fq::encode(const std::uint64_t* digits) const {
    Elem a = 0;
    for (unsigned i = e_; i-- > 0;) a = a * p_ + digits[i];
    return a;
}

Fq::Elem Fq::from_int(std::int64_t n) const {
    std::int64_t m = n % static_cast<std::int64_t>(p_);
    if (m < 0) m += static_cast<std::int64_t>(p_);
    return static_cast<Elem>(m);
}

Fq::Elem Fq::add(Elem a, Elem b) const {
    if (e_ == 1) return (a + b) % p_;
    std::uint64_t da[8], db[8];
    decode(a, da);
    decode(b, db);
    for (unsigned i = 0; i < e_; ++i) da[i] = (da[i] + db[i]) % p_;
    return encode(da);
}

Fq::Elem Fq::neg(Elem a) const {
    if (e_ == 1) return (p_ - a) % p_;
    std::uint64_t da[8];
    decode(a, da);
    for (unsigned i = 0; i < e_; ++i) da[i] = (p_ - da[i]) % p_;
    return encode(da);
}

Fq::Elem Fq::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Fq::Elem Fq::mul(Elem a, Elem b) const {
    if (e_ == 1) return a * b % p_;
    if (a == 0 || b == 0) return 0;
    std::uint64_t da[8], db[8], prod[15] = {0};
    decode(a, da);
    decode(b, db);
    for (unsigned i = 0; i < e_; ++i) {
        if (da[i] == 0) continue;
        for (unsigned j = 0; j < e_; ++j) prod[i + j] += da[i] * db[j];
    }
    std::uint64_t res[8];
    for (unsigned i = 0; i < e_; ++i) res[i] = prod[i] % p_;
    for (unsigned k = 0; k + 1 < e_; ++k) {
        std::uint64_t hi = prod[e_ + k] % p_;
        if (hi == 0) continue;
        for (unsigned i = 0; i < e_; ++i) res[i] = (res[i] + hi * red_[k][i]) % p_;
    }
    return encode(res);
}

Fq::Elem Fq::pow(Elem a, std::uint64_t n) const {
    Elem r = 1, base = a;
    while (n) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

Fq::Elem Fq::inv(Elem a) const {
    if (a == 0) throw AlgebraError("division by zero");
    return pow(a, q_ - 2);
}

std::string Fq::to_string(Elem a) const {
    if (a < p_) return std::to_string(a);
    std::uint64_t d[8];
    decode(a, d);
    std::ostringstream os;
    bool first = true;
    for (unsigned i = e_; i-- > 0;) {
        if (d[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << d[0];
            continue;
        }
        if (d[i] != 1) os << d[i] << "*";
        os << "t";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

} // namespace cartier

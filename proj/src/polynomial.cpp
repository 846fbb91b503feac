#include "cartier/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cartier {

Polynomial::Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

Polynomial Polynomial::constant(RingPtr ring, Fq::Elem c) {
    Polynomial p(ring);
    if (!ring->fq().is_zero(c)) p.terms_.push_back({Exponents(ring->nvars(), 0), c});
    return p;
}

Polynomial Polynomial::from_int(RingPtr ring, std::int64_t n) {
    return constant(ring, ring->fq().from_int(n));
}

Polynomial Polynomial::variable(RingPtr ring, std::size_t index, std::uint32_t power) {
    Exponents e(ring->nvars(), 0);
    e[index] = power;
    return monomial(std::move(ring), std::move(e), 1);
}

Polynomial Polynomial::monomial(RingPtr ring, Exponents exp, Fq::Elem c) {
    Polynomial p(ring);
    if (!ring->fq().is_zero(c)) p.terms_.push_back({std::move(exp), c});
    return p;
}

Polynomial Polynomial::from_sorted_terms(RingPtr ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
}

const Term& Polynomial::leading_term() const {
    if (terms_.empty()) throw AlgebraError("leading term of zero polynomial");
    return terms_.front();
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (auto e : terms_[0].exp)
        if (e != 0) return false;
    return true;
}

Fq::Elem Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    const Term& last = terms_.back();
    for (auto e : last.exp)
        if (e != 0) return 0;
    return last.coeff;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_same_ring(ring_, o.ring_);
    const Fq& F = ring_->fq();
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        int c = ring_->cmp(terms_[i].exp, o.terms_[j].exp);
        if (c > 0) {
            out.push_back(terms_[i++]);
        } else if (c < 0) {
            out.push_back(o.terms_[j++]);
        } else {
            Fq::Elem s = F.add(terms_[i].coeff, o.terms_[j].coeff);
            if (!F.is_zero(s)) out.push_back({terms_[i].exp, s});
            ++i, ++j;
        }
    }
    while (i < terms_.size()) out.push_back(terms_[i++]);
    while (j < o.terms_.size()) out.push_back(o.terms_[j++]);
    return from_sorted_terms(ring_, std::move(out));
}

Polynomial Polynomial::operator-() const {
    const Fq& F = ring_->fq();
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff = F.neg(t.coeff);
    return from_sorted_terms(ring_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::scaled(Fq::Elem c) const {
    const Fq& F = ring_->fq();
    if (F.is_zero(c)) return Polynomial(ring_);
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff = F.mul(t.coeff, c);
    return from_sorted_terms(ring_, std::move(out));
}

Polynomial Polynomial::times_monomial(const Exponents& exp, Fq::Elem c) const {
    const Fq& F = ring_->fq();
    if (F.is_zero(c)) return Polynomial(ring_);
    std::vector<Term> out = terms_;
    for (auto& t : out) {
        for (std::size_t k = 0; k < exp.size(); ++k) t.exp[k] += exp[k];
        t.coeff = F.mul(t.coeff, c);
    }
    // multiplying by a fixed monomial preserves the order of terms
    return from_sorted_terms(ring_, std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_same_ring(ring_, o.ring_);
    const Fq& F = ring_->fq();
    auto cmp = [this](const Exponents& a, const Exponents& b) { return ring_->cmp(a, b) > 0; };
    std::map<Exponents, Fq::Elem, decltype(cmp)> acc(cmp);
    for (const auto& ta : terms_) {
        for (const auto& tb : o.terms_) {
            Exponents e = ta.exp;
            for (std::size_t k = 0; k < e.size(); ++k) e[k] += tb.exp[k];
            Fq::Elem c = F.mul(ta.coeff, tb.coeff);
            auto [it, fresh] = acc.emplace(std::move(e), c);
            if (!fresh) it->second = F.add(it->second, c);
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [e, c] : acc)
        if (!F.is_zero(c)) out.push_back({e, c});
    return from_sorted_terms(ring_, std::move(out));
}

Polynomial Polynomial::pow(std::uint64_t n) const {
    Polynomial r = Polynomial::constant(ring_, 1);
    Polynomial base = *this;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].exp != o.terms_[i].exp) return false;
    return true;
}

std::int64_t Polynomial::total_degree() const {
    std::int64_t d = -1;
    for (const auto& t : terms_) {
        std::int64_t s = 0;
        for (auto e : t.exp) s += e;
        d = std::max(d, s);
    }
    return d;
}

std::int64_t Polynomial::degree_in(std::size_t var) const {
    std::int64_t d = -1;
    for (const auto& t : terms_) d = std::max<std::int64_t>(d, t.exp[var]);
    return d;
}

Polynomial Polynomial::to_ring(const RingPtr& other) const {
    if (!ring_->same_variables(*other)) throw AlgebraError("mixed rings");
    std::vector<Term> out = terms_;
    std::sort(out.begin(), out.end(),
              [&](const Term& a, const Term& b) { return other->cmp(a.exp, b.exp) > 0; });
    return from_sorted_terms(other, std::move(out));
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    const Fq& F = ring_->fq();
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        bool has_vars = false;
        for (auto e : t.exp)
            if (e != 0) has_vars = true;
        std::string cs;
        if (F.in_prime_field(t.coeff)) {
            if (t.coeff != 1 || !has_vars) cs = F.to_string(t.coeff);
        } else {
            cs = "(" + F.to_string(t.coeff) + ")";
        }
        os << cs;
        bool need_star = !cs.empty();
        for (std::size_t k = 0; k < t.exp.size(); ++k) {
            if (t.exp[k] == 0) continue;
            if (need_star) os << "*";
            need_star = true;
            os << ring_->var_name(k);
            if (t.exp[k] > 1) os << "^" << t.exp[k];
        }
    }
    return os.str();
}

DigitDecomposition digit_decompose(const Polynomial& f) {
    const auto& ring = f.ring();
    const std::uint64_t q = ring->fq().q();
    DigitDecomposition out;
    out.q = q;
    for (const auto& t : f.terms()) {
        Exponents digit(t.exp.size()), quot(t.exp.size());
        for (std::size_t k = 0; k < t.exp.size(); ++k) {
            digit[k] = static_cast<std::uint32_t>(t.exp[k] % q);
            quot[k] = static_cast<std::uint32_t>(t.exp[k] / q);
        }
        auto it = out.parts.find(digit);
        if (it == out.parts.end()) it = out.parts.emplace(digit, Polynomial::zero(ring)).first;
        it->second = it->second + Polynomial::monomial(ring, std::move(quot), t.coeff);
    }
    return out;
}

Polynomial DigitDecomposition::reconstruct(const RingPtr& ring) const {
    Polynomial acc = Polynomial::zero(ring);
    for (const auto& [d, fd] : parts) {
        acc = acc + fd.pow(q).times_monomial(d, 1);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct PolyParser {
    const RingPtr& ring;
    const std::string& s;
    std::size_t pos = 0;

    PolyParser(const RingPtr& r, const std::string& text) : ring(r), s(text) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw AlgebraError("polynomial syntax error at position " + std::to_string(pos) + " in '" +
                           s + "': " + msg);
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    std::uint64_t parse_uint() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected integer");
        std::uint64_t v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
            if (v > (std::uint64_t(1) << 62)) fail("integer too large");
            ++pos;
        }
        return v;
    }

    std::string parse_ident() {
        skip_ws();
        if (pos >= s.size() ||
            !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            fail("expected identifier");
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    // polynomial in t with integer coefficients, evaluated into F_q
    Fq::Elem parse_t_poly(char terminator) {
        const Fq& F = ring->fq();
        Fq::Elem acc = 0;
        int sign = 1;
        if (eat('-')) sign = -1;
        while (true) {
            Fq::Elem term = parse_t_term();
            if (sign < 0) term = F.neg(term);
            acc = F.add(acc, term);
            skip_ws();
            if (peek() == '+') {
                ++pos;
                sign = 1;
            } else if (peek() == '-') {
                ++pos;
                sign = -1;
            } else if (peek() == terminator || peek() == '\0') {
                return acc;
            } else {
                fail("unexpected character in field element");
            }
        }
    }

    Fq::Elem parse_t_term() {
        const Fq& F = ring->fq();
        Fq::Elem c = 1;
        bool any = false;
        while (true) {
            skip_ws();
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                c = F.mul(c, F.from_int(static_cast<std::int64_t>(parse_uint())));
                any = true;
            } else if (pos < s.size() && s[pos] == 't') {
                ++pos;
                std::uint64_t k = 1;
                if (eat('^')) k = parse_uint();
                if (F.e() == 1) fail("'t' is only meaningful for extension fields (e > 1)");
                // t itself is element p (digit 1 in position 1)
                Fq::Elem tval = F.p();
                c = F.mul(c, F.pow(tval, k));
                any = true;
            } else {
                break;
            }
            if (!eat('*')) break;
        }
        if (!any) fail("expected field element term");
        return c;
    }

    Polynomial parse_poly(char terminator = '\0') {
        Polynomial acc = Polynomial::zero(ring);
        int sign = 1;
        skip_ws();
        if (peek() == '-') {
            ++pos;
            sign = -1;
        } else if (peek() == '+') {
            ++pos;
        }
        while (true) {
            Polynomial term = parse_term();
            acc = sign < 0 ? acc - term : acc + term;
            skip_ws();
            if (peek() == '+') {
                ++pos;
                sign = 1;
            } else if (peek() == '-') {
                ++pos;
                sign = -1;
            } else if (peek() == terminator || peek() == '\0') {
                return acc;
            } else {
                fail("unexpected character");
            }
        }
    }

    Polynomial parse_term() {
        const Fq& F = ring->fq();
        Fq::Elem coeff = 1;
        Exponents exp(ring->nvars(), 0);
        bool any = false;
        while (true) {
            skip_ws();
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                coeff = F.mul(coeff, F.from_int(static_cast<std::int64_t>(parse_uint())));
                any = true;
            } else if (pos < s.size() && s[pos] == '(') {
                ++pos;
                Fq::Elem c = parse_t_poly(')');
                if (!eat(')')) fail("expected ')'");
                coeff = F.mul(coeff, c);
                any = true;
            } else if (pos < s.size() && s[pos] == 't' &&
                       (pos + 1 >= s.size() ||
                        !(std::isalnum(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '_'))) {
                ++pos;
                std::uint64_t k = 1;
                if (eat('^')) k = parse_uint();
                if (F.e() == 1) fail("'t' is only meaningful for extension fields (e > 1)");
                coeff = F.mul(coeff, F.pow(F.p(), k));
                any = true;
            } else if (pos < s.size() &&
                       (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
                std::string name = parse_ident();
                int vi = ring->var_index(name);
                if (vi < 0) fail("unknown variable '" + name + "'");
                std::uint64_t k = 1;
                if (eat('^')) k = parse_uint();
                exp[static_cast<std::size_t>(vi)] += static_cast<std::uint32_t>(k);
                any = true;
            } else {
                break;
            }
            if (!eat('*')) break;
        }
        if (!any) fail("expected term");
        return Polynomial::monomial(ring, std::move(exp), coeff);
    }
};

} // namespace

Polynomial parse_polynomial(const RingPtr& ring, const std::string& text) {
    PolyParser p(ring, text);
    Polynomial out = p.parse_poly();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing characters");
    return out;
}

} // namespace cartier

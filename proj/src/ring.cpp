#include "cartier/ring.hpp"

#include <algorithm>

namespace cartier {

int cmp_exponents(OrderKind kind, const Exponents& a, const Exponents& b) {
    const std::size_t n = a.size();
    auto total = [n](const Exponents& v) {
        std::uint64_t d = 0;
        for (std::size_t i = 0; i < n; ++i) d += v[i];
        return d;
    };
    switch (kind) {
    case OrderKind::Grevlex: {
        std::uint64_t da = total(a), db = total(b);
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = n; i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        }
        return 0;
    }
    case OrderKind::Lex: {
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        }
        return 0;
    }
    case OrderKind::Grlex: {
        std::uint64_t da = total(a), db = total(b);
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        }
        return 0;
    }
    case OrderKind::LastVarElim: {
        if (n == 0) return 0;
        if (a[n - 1] != b[n - 1]) return a[n - 1] > b[n - 1] ? 1 : -1;
        return cmp_exponents(OrderKind::Grevlex, a, b);
    }
    }
    return 0;
}

OrderKind order_kind_from_string(const std::string& s) {
    if (s == "grevlex") return OrderKind::Grevlex;
    if (s == "lex") return OrderKind::Lex;
    if (s == "grlex") return OrderKind::Grlex;
    throw AlgebraError("unknown monomial order '" + s + "' (expected grevlex, lex, or grlex)");
}

std::string order_kind_to_string(OrderKind k) {
    switch (k) {
    case OrderKind::Grevlex: return "grevlex";
    case OrderKind::Lex: return "lex";
    case OrderKind::Grlex: return "grlex";
    case OrderKind::LastVarElim: return "lastvar-elim";
    }
    return "?";
}

Ring::Ring(FieldPtr field, std::vector<std::string> vars, OrderKind order)
    : field_(std::move(field)), vars_(std::move(vars)), order_(order) {
    if (vars_.empty()) throw AlgebraError("ring needs at least one variable");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        if (v.empty() || v == "t") throw AlgebraError("invalid variable name '" + v + "'");
        if (!(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
            throw AlgebraError("invalid variable name '" + v + "'");
        for (char c : v)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
                throw AlgebraError("invalid variable name '" + v + "'");
        for (std::size_t j = i + 1; j < vars_.size(); ++j)
            if (vars_[j] == v) throw AlgebraError("duplicate variable name '" + v + "'");
    }
}

RingPtr Ring::make(FieldPtr field, std::vector<std::string> vars, OrderKind order) {
    return RingPtr(new Ring(std::move(field), std::move(vars), order));
}

int Ring::var_index(const std::string& name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
}

bool Ring::same_variables(const Ring& other) const {
    return field_->same_field(*other.field_) && vars_ == other.vars_;
}

bool Ring::same_ring(const Ring& other) const {
    return same_variables(other) && order_ == other.order_;
}

RingPtr Ring::with_order(OrderKind k) const {
    return make(field_, vars_, k);
}

RingPtr Ring::extended(const std::string& fresh_var, OrderKind k) const {
    auto vars = vars_;
    vars.push_back(fresh_var);
    return make(field_, std::move(vars), k);
}

void check_same_ring(const RingPtr& a, const RingPtr& b) {
    if (!a || !b || !a->same_ring(*b)) throw AlgebraError("mixed rings");
}

} // namespace cartier

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cartier/field.hpp"

namespace cartier {

using Exponents = std::vector<std::uint32_t>;

enum class OrderKind {
    Grevlex,     // graded reverse lexicographic (default)
    Lex,
    Grlex,
    LastVarElim, // degree in the last variable first, ties by grevlex
};

// three-way compare, >0 when a > b
int cmp_exponents(OrderKind kind, const Exponents& a, const Exponents& b);

OrderKind order_kind_from_string(const std::string& s);
std::string order_kind_to_string(OrderKind k);

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// F_q[x_1..x_n] with a fixed variable list and monomial order.
class Ring {
public:
    static RingPtr make(FieldPtr field, std::vector<std::string> vars,
                        OrderKind order = OrderKind::Grevlex);

    const FieldPtr& field() const { return field_; }
    const Fq& fq() const { return *field_; }
    std::size_t nvars() const { return vars_.size(); }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::string& var_name(std::size_t i) const { return vars_[i]; }
    int var_index(const std::string& name) const; // -1 when absent
    OrderKind order() const { return order_; }

    int cmp(const Exponents& a, const Exponents& b) const { return cmp_exponents(order_, a, b); }

    // same field, same variables (order may differ)
    bool same_variables(const Ring& other) const;
    bool same_ring(const Ring& other) const;

    RingPtr with_order(OrderKind k) const;
    // this ring's variables plus one fresh variable appended
    RingPtr extended(const std::string& fresh_var, OrderKind k) const;

private:
    Ring(FieldPtr field, std::vector<std::string> vars, OrderKind order);
    FieldPtr field_;
    std::vector<std::string> vars_;
    OrderKind order_;
};

void check_same_ring(const RingPtr& a, const RingPtr& b);

} // namespace cartier

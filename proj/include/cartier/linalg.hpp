#pragma once

#include <vector>

#include "cartier/field.hpp"

namespace cartier {

// Dense row-major matrix over F_q; rows[i][j].
struct FqMatrix {
    std::size_t nrows = 0, ncols = 0;
    std::vector<std::vector<Fq::Elem>> rows;

    static FqMatrix zero(std::size_t r, std::size_t c) {
        FqMatrix m;
        m.nrows = r;
        m.ncols = c;
        m.rows.assign(r, std::vector<Fq::Elem>(c, 0));
        return m;
    }
    static FqMatrix identity(std::size_t n) {
        FqMatrix m = zero(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows[i][i] = 1;
        return m;
    }
    bool is_zero() const {
        for (const auto& r : rows)
            for (auto v : r)
                if (v != 0) return false;
        return true;
    }
};

FqMatrix mat_mul(const Fq& F, const FqMatrix& a, const FqMatrix& b);
FqMatrix mat_pow(const Fq& F, FqMatrix a, std::uint64_t n);
std::vector<Fq::Elem> mat_apply(const Fq& F, const FqMatrix& a, const std::vector<Fq::Elem>& v);

// reduced row echelon form in place; returns pivot column indices
std::vector<std::size_t> rref(const Fq& F, FqMatrix& m);

// basis of the right null space {v : m v = 0}, as rows
FqMatrix null_space(const Fq& F, const FqMatrix& m);

// row space basis (RREF nonzero rows) — canonical representation of a subspace
FqMatrix row_space(const Fq& F, FqMatrix m);

// constraints matrix A with {v : A v = 0} = row space of basis
FqMatrix subspace_constraints(const Fq& F, const FqMatrix& basis, std::size_t dim);

bool subspace_equal(const Fq& F, const FqMatrix& a, const FqMatrix& b);
// does the row space of a contain the row space of b
bool subspace_contains(const Fq& F, const FqMatrix& a, const FqMatrix& b);

// stack matrices vertically (same ncols)
FqMatrix vstack(const std::vector<FqMatrix>& parts);

} // namespace cartier

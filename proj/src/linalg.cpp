#include "cartier/linalg.hpp"

namespace cartier {

FqMatrix mat_mul(const Fq& F, const FqMatrix& a, const FqMatrix& b) {
    FqMatrix out = FqMatrix::zero(a.nrows, b.ncols);
    for (std::size_t i = 0; i < a.nrows; ++i)
        for (std::size_t k = 0; k < a.ncols; ++k) {
            Fq::Elem aik = a.rows[i][k];
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.ncols; ++j)
                out.rows[i][j] = F.add(out.rows[i][j], F.mul(aik, b.rows[k][j]));
        }
    return out;
}

FqMatrix mat_pow(const Fq& F, FqMatrix a, std::uint64_t n) {
    FqMatrix r = FqMatrix::identity(a.nrows);
    while (n) {
        if (n & 1) r = mat_mul(F, r, a);
        a = mat_mul(F, a, a);
        n >>= 1;
    }
    return r;
}

std::vector<Fq::Elem> mat_apply(const Fq& F, const FqMatrix& a, const std::vector<Fq::Elem>& v) {
    std::vector<Fq::Elem> out(a.nrows, 0);
    for (std::size_t i = 0; i < a.nrows; ++i)
        for (std::size_t j = 0; j < a.ncols; ++j)
            if (a.rows[i][j] != 0 && v[j] != 0)
                out[i] = F.add(out[i], F.mul(a.rows[i][j], v[j]));
    return out;
}

std::vector<std::size_t> rref(const Fq& F, FqMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.ncols && row < m.nrows; ++col) {
        std::size_t piv = row;
        while (piv < m.nrows && m.rows[piv][col] == 0) ++piv;
        if (piv == m.nrows) continue;
        std::swap(m.rows[row], m.rows[piv]);
        Fq::Elem inv = F.inv(m.rows[row][col]);
        for (auto& x : m.rows[row]) x = F.mul(x, inv);
        for (std::size_t r = 0; r < m.nrows; ++r) {
            if (r == row || m.rows[r][col] == 0) continue;
            Fq::Elem c = m.rows[r][col];
            for (std::size_t j = 0; j < m.ncols; ++j)
                m.rows[r][j] = F.sub(m.rows[r][j], F.mul(c, m.rows[row][j]));
        }
        pivots.push_back(col);
        ++row;
    }
    m.rows.resize(row);
    m.nrows = row;
    return pivots;
}

FqMatrix null_space(const Fq& F, const FqMatrix& m) {
    FqMatrix r = m;
    std::vector<std::size_t> pivots = rref(F, r);
    std::vector<bool> is_pivot(m.ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    FqMatrix out;
    out.ncols = m.ncols;
    for (std::size_t freecol = 0; freecol < m.ncols; ++freecol) {
        if (is_pivot[freecol]) continue;
        std::vector<Fq::Elem> v(m.ncols, 0);
        v[freecol] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = F.neg(r.rows[i][freecol]);
        out.rows.push_back(std::move(v));
    }
    out.nrows = out.rows.size();
    return out;
}

FqMatrix row_space(const Fq& F, FqMatrix m) {
    rref(F, m);
    return m;
}

FqMatrix subspace_constraints(const Fq& F, const FqMatrix& basis, std::size_t dim) {
    if (basis.nrows == 0) return FqMatrix::identity(dim);
    // rows orthogonal to the basis cut out exactly its span
    return null_space(F, basis);
}

bool subspace_equal(const Fq& F, const FqMatrix& a, const FqMatrix& b) {
    FqMatrix ra = row_space(F, a), rb = row_space(F, b);
    if (ra.nrows != rb.nrows) return false;
    return ra.rows == rb.rows;
}

bool subspace_contains(const Fq& F, const FqMatrix& a, const FqMatrix& b) {
    FqMatrix ra = row_space(F, a);
    for (const auto& v : b.rows) {
        // reduce v against ra
        std::vector<Fq::Elem> w = v;
        for (std::size_t i = 0; i < ra.nrows; ++i) {
            std::size_t piv = 0;
            while (piv < ra.ncols && ra.rows[i][piv] == 0) ++piv;
            if (piv == ra.ncols) continue;
            if (w[piv] != 0) {
                Fq::Elem c = w[piv];
                for (std::size_t j = 0; j < ra.ncols; ++j)
                    w[j] = F.sub(w[j], F.mul(c, ra.rows[i][j]));
            }
        }
        for (auto x : w)
            if (x != 0) return false;
    }
    return true;
}

FqMatrix vstack(const std::vector<FqMatrix>& parts) {
    FqMatrix out;
    for (const auto& p : parts) {
        out.ncols = p.ncols;
        for (const auto& r : p.rows) out.rows.push_back(r);
    }
    out.nrows = out.rows.size();
    return out;
}

} // namespace cartier

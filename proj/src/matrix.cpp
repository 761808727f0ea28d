#include "homkit/matrix.hpp"

#include <algorithm>

namespace homkit
{

DMatrix to_double(const QMatrix &m)
{
    DMatrix d(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            d(i, j) = m(i, j).get_d();
    return d;
}

RowEchelon rref(QMatrix m)
{
    RowEchelon out;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col)
    {
        int piv = -1;
        for (int r = row; r < m.rows(); ++r)
            if (sgn(m(r, col)) != 0)
            {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        if (piv != row)
            for (int c = 0; c < m.cols(); ++c)
                std::swap(m(piv, c), m(row, c));
        Rational inv = 1 / m(row, col);
        for (int c = col; c < m.cols(); ++c)
            m(row, c) *= inv;
        for (int r = 0; r < m.rows(); ++r)
        {
            if (r == row || sgn(m(r, col)) == 0)
                continue;
            Rational factor = m(r, col);
            for (int c = col; c < m.cols(); ++c)
                if (sgn(m(row, c)) != 0)
                    m(r, c) -= factor * m(row, c);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(m);
    return out;
}

int rank(const QMatrix &m) { return int(rref(m).pivots.size()); }

std::vector<std::vector<Rational>> nullspace(const QMatrix &m)
{
    auto ech = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : ech.pivots)
        is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < m.cols(); ++free)
    {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(m.cols(), Rational(0));
        v[free] = 1;
        for (size_t r = 0; r < ech.pivots.size(); ++r)
            v[ech.pivots[r]] = -ech.reduced(int(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve(const QMatrix &m, const std::vector<Rational> &b)
{
    if (int(b.size()) != m.rows())
        throw Error("solve: right-hand side length mismatch");
    QMatrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i)
    {
        for (int j = 0; j < m.cols(); ++j)
            aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    auto ech = rref(std::move(aug));
    if (!ech.pivots.empty() && ech.pivots.back() == m.cols())
        return std::nullopt;
    std::vector<Rational> x(m.cols(), Rational(0));
    for (size_t r = 0; r < ech.pivots.size(); ++r)
        x[ech.pivots[r]] = ech.reduced(int(r), m.cols());
    return x;
}

std::optional<QMatrix> inverse(const QMatrix &m)
{
    if (m.rows() != m.cols())
        throw Error("inverse of a non-square matrix");
    int n = m.rows();
    QMatrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto ech = rref(std::move(aug));
    if (int(ech.pivots.size()) < n || ech.pivots[n - 1] != n - 1)
        return std::nullopt;
    QMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv(i, j) = ech.reduced(i, n + j);
    return inv;
}

std::optional<DMatrix> inverse(const DMatrix &m, double tol)
{
    if (m.rows() != m.cols())
        throw Error("inverse of a non-square matrix");
    int n = m.rows();
    DMatrix a = m;
    DMatrix inv = DMatrix::identity(n);
    for (int col = 0; col < n; ++col)
    {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(piv, col)))
                piv = r;
        if (std::fabs(a(piv, col)) <= tol)
            return std::nullopt;
        for (int c = 0; c < n; ++c)
        {
            std::swap(a(piv, c), a(col, c));
            std::swap(inv(piv, c), inv(col, c));
        }
        double d = a(col, col);
        for (int c = 0; c < n; ++c)
        {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < n; ++r)
        {
            if (r == col || a(r, col) == 0.0)
                continue;
            double f = a(r, col);
            for (int c = 0; c < n; ++c)
            {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

double max_abs(const DMatrix &m)
{
    double mx = 0;
    for (double v : m.data())
        mx = std::max(mx, std::fabs(v));
    return mx;
}

DMatrix expm(const DMatrix &a)
{
    if (a.rows() != a.cols())
        throw Error("expm of a non-square matrix");
    int n = a.rows();
    double norm = 0;
    for (int i = 0; i < n; ++i)
    {
        double row = 0;
        for (int j = 0; j < n; ++j)
            row += std::fabs(a(i, j));
        norm = std::max(norm, row);
    }
    // Scale so that ||A / 2^s|| <= 1/2; 18 Taylor terms then leave a
    // remainder below 2^-18 / 18! ~ 1e-21 before squaring.
    int squarings = 0;
    while (norm > 0.5)
    {
        norm /= 2;
        ++squarings;
    }
    DMatrix scaled = std::ldexp(1.0, -squarings) * a;
    DMatrix result = DMatrix::identity(n);
    DMatrix term = DMatrix::identity(n);
    for (int k = 1; k <= 18; ++k)
    {
        term = (1.0 / k) * (term * scaled);
        result = result + term;
    }
    for (int s = 0; s < squarings; ++s)
        result = result * result;
    return result;
}

} // namespace homkit

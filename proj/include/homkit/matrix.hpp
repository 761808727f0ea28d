#pragma once

#include "homkit/scalar.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace homkit
{

/// Small dense row-major matrix. Used for frame metrics, basis changes and
/// endomorphisms of the isotropy representation.
template <class T> class Matrix
{
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, T(0)) {}

    static Matrix identity(int n)
    {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T &operator()(int i, int j) { return data_[size_t(i) * cols_ + j]; }
    const T &operator()(int i, int j) const { return data_[size_t(i) * cols_ + j]; }

    const std::vector<T> &data() const { return data_; }
    std::vector<T> &data() { return data_; }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const
    {
        for (const auto &v : data_)
            if (!homkit::is_zero(v))
                return false;
        return true;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b)
    {
        if (a.cols_ != b.rows_)
            throw Error("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k)
            {
                const T &aik = a(i, k);
                if (homkit::is_zero(aik))
                    continue;
                for (int j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend Matrix operator+(Matrix a, const Matrix &b)
    {
        a.check_same(b);
        for (size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] += b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix &b)
    {
        a.check_same(b);
        for (size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] -= b.data_[i];
        return a;
    }
    friend Matrix operator*(const T &s, Matrix a)
    {
        for (auto &v : a.data_)
            v *= s;
        return a;
    }
    friend bool operator==(const Matrix &a, const Matrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    void check_same(const Matrix &b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_)
            throw Error("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using DMatrix = Matrix<double>;

template <class T> Matrix<T> commutator(const Matrix<T> &a, const Matrix<T> &b)
{
    return a * b - b * a;
}

DMatrix to_double(const QMatrix &m);

/// Reduced row echelon form over the rationals.
struct RowEchelon
{
    QMatrix reduced;
    std::vector<int> pivots; // pivot column of each nonzero row
};
RowEchelon rref(QMatrix m);

int rank(const QMatrix &m);

/// Basis of the right null space {x : m x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const QMatrix &m);

/// Exact solution of m x = b, or nullopt when inconsistent. Free variables are set to 0.
std::optional<std::vector<Rational>> solve(const QMatrix &m, const std::vector<Rational> &b);

std::optional<QMatrix> inverse(const QMatrix &m);

/// Partial-pivot Gauss-Jordan inverse; nullopt when the pivot drops below tol.
std::optional<DMatrix> inverse(const DMatrix &m, double tol = 1e-300);

/// Matrix exponential by truncated Taylor series with scaling and squaring.
DMatrix expm(const DMatrix &a);

double max_abs(const DMatrix &m);

} // namespace homkit

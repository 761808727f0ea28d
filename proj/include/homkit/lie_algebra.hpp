#pragma once

#include "homkit/matrix.hpp"
#include "homkit/tensor.hpp"

#include <string>
#include <vector>

namespace homkit
{

/// Finite-dimensional Lie algebra in a basis: [e_a, e_b] = f_ab^c e_c.
/// The structure tensor has valence (down, down, up) and is antisymmetric
/// in its first two slots.
class LieAlgebra
{
  public:
    LieAlgebra(std::vector<std::string> labels, Tensor structure);

    static std::vector<std::string> default_labels(int n);
    static LieAlgebra abelian(int n);

    int dim() const { return int(labels_.size()); }
    const std::vector<std::string> &labels() const { return labels_; }
    const Tensor &structure() const { return f_; }
    ScalarKind kind() const { return f_.kind(); }

    /// f_ab^c (exact algebras only).
    const Rational &coeff(int a, int b, int c) const;
    int index_of(const std::string &label) const;

  private:
    std::vector<std::string> labels_;
    Tensor f_;
};

/// Accumulates exact brackets; set(a, b, ...) also writes the (b, a) entry.
class BracketTable
{
  public:
    explicit BracketTable(std::vector<std::string> labels);
    explicit BracketTable(int n) : BracketTable(LieAlgebra::default_labels(n)) {}

    int dim() const { return int(labels_.size()); }
    void add(int a, int b, int c, const Rational &value);
    void set(int a, int b, int c, const Rational &value);
    LieAlgebra build() const;

  private:
    std::vector<std::string> labels_;
    std::vector<Rational> f_;
};

struct JacobiResult
{
    /// J_abc^d = f_ab^e f_ec^d + f_bc^e f_ea^d + f_ca^e f_eb^d
    Tensor residual;
    Scalar max_abs;
    bool vanishes() const { return max_abs.is_zero(); }
};

/// OpenMP kernel; parallel over the first bracket slot.
JacobiResult jacobi_residual(const LieAlgebra &algebra);
/// Serial reference implementation kept for testing and benchmarking.
JacobiResult jacobi_residual_serial(const LieAlgebra &algebra);

/// New basis e'_a = sum_x P(a, x) e_x (rows of P are the new generators in old
/// coordinates). Then f'_ab^c = P(a,x) P(b,y) f_xy^z Pinv(z,c).
LieAlgebra change_basis(const LieAlgebra &algebra, const QMatrix &p,
                        std::vector<std::string> labels = {});

struct ReductiveSplit
{
    std::vector<int> m;
    std::vector<int> h;
};

struct ReductiveReport
{
    bool reductive = true;
    /// Offending brackets, e.g. "[h0,m1] has component 1 along h2".
    std::vector<std::string> violations;
    /// Basis of h' = span of the h-components of [m, m], as full coordinate vectors.
    std::vector<std::vector<Rational>> h_prime;
};

ReductiveReport check_reductive(const LieAlgebra &algebra, const ReductiveSplit &split);

/// Data for an algebra on m + h' where h' acts on m through explicit matrices.
///   [X_a, X_b] = sum_c mm(a,b,c) X_c + (mm_h(a,b) decomposed in h_basis)
///   [A, X_b]   = A X_b              (column b of the matrix A)
///   [A, B]     = AB - BA            (decomposed in h_basis)
struct ReductiveData
{
    std::vector<std::string> m_labels;
    std::vector<std::string> h_labels;
    std::vector<Rational> mm;       // m_dim^3, index (a*m + b)*m + c
    std::vector<QMatrix> mm_h;      // m_dim^2 endomorphisms of m; empty = all zero
    std::vector<QMatrix> h_basis;   // linearly independent m_dim x m_dim matrices
};

/// Throws Error naming the offending bracket when an h-part lies outside
/// span(h_basis) or h_basis is not closed under commutators.
LieAlgebra assemble_reductive(const ReductiveData &data);

/// Coordinates of a matrix in the span of a basis, or nullopt if outside.
std::optional<std::vector<Rational>> span_coordinates(const std::vector<QMatrix> &basis,
                                                      const QMatrix &m);

/// Linearly independent spanning set of the Lie algebra generated by the inputs.
std::vector<QMatrix> lie_closure(const std::vector<QMatrix> &generators);

/// Rational reconstruction of a float algebra within tol; throws when a
/// component is not within tol of a rational with denominator <= max_den.
LieAlgebra rationalize(const LieAlgebra &algebra, double tol = 1e-9, long max_den = 1000000);

} // namespace homkit

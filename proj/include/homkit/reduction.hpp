#pragma once

#include "homkit/lie_algebra.hpp"
#include "homkit/plane_wave.hpp"
#include "homkit/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace homkit
{

/// Space- or time-like trace vector. Basis V, Z_1..Z_n, then h'.
///   [V,Z_i]   = lambda Z_i + F_i^j Z_j + Rbar(V,Z_i)
///   [Z_i,Z_j] = aleph F_ij V + C_ij^k Z_k + Rbar(Z_i,Z_j)
/// with Rbar(V,Z_i) = R_i^{mn} M_mn and Rbar(Z_i,Z_j) = S_ij^{mn} M_mn.
/// All tensors are stored with lower indices; eta = diag(-aleph, 1, .., 1)
/// raises them. M_mn acts on Z as (M_mn)^a_k = delta^a_m eta_nk - delta^a_n eta_mk.
struct NondegenerateAnsatz
{
    int n = 1;
    Rational lambda = 1;
    int aleph_sign = 1;
    QMatrix F;       // F_ij, antisymmetric
    Tensor C;        // C_ijk, totally antisymmetric
    Tensor R;        // R_imn, antisymmetric in (m,n)
    Tensor Scurv;    // S_ijmn, antisymmetric in (i,j) and (m,n)
    std::vector<QMatrix> h_basis; // n x n matrices in so(eta)

    static NondegenerateAnsatz zero(int n, Rational lambda, int aleph_sign);
    QMatrix eta() const;
    void validate() const;
};

/// Null trace vector. Basis U, V, Z_1..Z_n, then the occupied null boosts
/// Zbar_a and a basis of the rotations that occur.
///   [U,V]     = lambda V + W_i Z_i + Rbar(U,V)
///   [U,Z_i]   = lambda Z_i + F_ij Z_j - W_i U + Rbar(U,Z_i)
///   [V,Z_i]   = W_i V + aleph_ij Z_j + Rbar(V,Z_i)
///   [Z_i,Z_j] = aleph_ij U + F_ij V + C_ijk Z_k + Rbar(Z_i,Z_j)
/// Rbar(U,V)     = -2 lambda W_a Zbar_a (occupied a) + Y_ij M_ij
/// Rbar(U,Z_i)   = h_ij Zbar_j + R_ijk M_jk / 2
/// Rbar(V,Z_i)   = rvz_boost_ij Zbar_j + rvz_rot_ijk M_jk / 2
/// Rbar(Z_i,Z_j) = S3_ijk Zbar_k + N_ijkl M_kl
struct DegenerateAnsatz
{
    int n = 1;
    Rational lambda = 1;
    std::vector<Rational> W;
    QMatrix F;
    QMatrix aleph;
    Tensor C;
    std::vector<int> occupancy; // 0-based directions whose null boost is present
    QMatrix h;
    QMatrix Y;
    Tensor R;
    Tensor S3;
    Tensor N;
    QMatrix rvz_boost;
    Tensor rvz_rot;

    static DegenerateAnsatz zero(int n, Rational lambda);
    bool occupied(int i) const;
    void validate() const;
};

/// Ansatz encoding the plane-wave algebra of (F, H): every direction occupied,
/// lambda = 1, F_ans = 2F, h = 2H - F.
DegenerateAnsatz ansatz_from_plane_wave(const PlaneWaveData &pw);

/// delta_F C_ijk = F_il C_ljk + F_jl C_ilk + F_kl C_ijl
Tensor f_derivation(const QMatrix &f, const Tensor &c);

LieAlgebra assemble_algebra(const NondegenerateAnsatz &a);
LieAlgebra assemble_algebra(const DegenerateAnsatz &a);

struct NamedResidual
{
    std::string name;
    Rational value; // max absolute component
};

/// Constraint formulas followed by the Jacobi identity split by the types of
/// its three arguments, e.g. "Jacobi (U,Z,Zbar)".
std::vector<NamedResidual> verify_constraints(const NondegenerateAnsatz &a);
std::vector<NamedResidual> verify_constraints(const DegenerateAnsatz &a);

/// The same ansatz in the lambda = 1 normalisation U' = U/lambda, V' = lambda V,
/// Zbar' = lambda Zbar.
DegenerateAnsatz normalize(const DegenerateAnsatz &a);

enum class Verdict
{
    symmetric_space,
    plane_wave,
    inconsistent
};
std::string to_string(Verdict v);

struct Redefinition
{
    std::string name;
    std::vector<std::string> labels; // labels after the change
    QMatrix basis_change;            // rows: new generators in old coordinates
};

struct ReductionReport
{
    Verdict verdict = Verdict::inconsistent;
    std::string failing; // first failing identity when inconsistent
    Rational lambda;
    std::vector<NamedResidual> residuals;
    std::vector<Redefinition> redefinitions;
    std::optional<LieAlgebra> algebra; // algebra in the final split
    std::optional<PlaneWaveData> plane_wave;
};

ReductionReport nondegenerate_reduce(const NondegenerateAnsatz &a);
ReductionReport degenerate_reduce(const DegenerateAnsatz &a);

struct GenerateOptions
{
    std::optional<std::vector<int>> occupancy; // degenerate only
    /// 0 = no isotropy, 1 = full orthogonal algebra, 2 = one random element
    std::optional<int> isotropy;
    int max_attempts = 50;
};

NondegenerateAnsatz generate_nondegenerate(int n, std::uint64_t seed, const GenerateOptions &opt = {});
DegenerateAnsatz generate_degenerate(int n, std::uint64_t seed, const GenerateOptions &opt = {});

} // namespace homkit

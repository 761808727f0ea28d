#pragma once

#include "homkit/hom_structure.hpp"
#include "homkit/lie_algebra.hpp"
#include "homkit/matrix.hpp"
#include "homkit/tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace homkit
{

/// Singular homogeneous plane wave with profile x^T e^{-zF} H e^{zF} x + s.
struct PlaneWaveData
{
    int n = 1;
    QMatrix F; // antisymmetric n x n
    QMatrix H; // symmetric n x n

    PlaneWaveData() = default;
    PlaneWaveData(int n, QMatrix f, QMatrix h);
    static PlaneWaveData zero(int n);
    int dim() const { return n + 2; }
};

/// Chart coordinates in the order (z, s, x^1..x^n).
struct ChartPoint
{
    double z = 0, s = 0;
    std::vector<double> x;

    std::vector<double> coords() const;
    static ChartPoint from_coords(const std::vector<double> &c);
};

/// Metric and its first three coordinate derivatives at a point. Derivative
/// slots come first: dg(a, m, n) = d_a g_mn, ddg(a, b, m, n), dddg(a, b, c, m, n).
struct GeometryJet
{
    Tensor g, dg, ddg, dddg;
};

/// M(z) = e^{-zF} H e^{zF} and its z-derivatives M^(k+1) = [M^(k), F].
std::vector<DMatrix> profile_derivatives(const PlaneWaveData &pw, double z, int order = 3);

GeometryJet metric_jet(const PlaneWaveData &pw, const ChartPoint &pt);

/// Gamma^r_mn with valence (u, d, d).
Tensor christoffel(const GeometryJet &jet);

/// R^r_smn = d_m G^r_ns - d_n G^r_ms + G^r_ml G^l_ns - G^r_nl G^l_ms.
Tensor riemann(const PlaneWaveData &pw, const ChartPoint &pt);
/// The same curvature with the first slot lowered.
Tensor riemann_lower(const PlaneWaveData &pw, const ChartPoint &pt);

/// Light-cone frame (+, -, 1..n) structure: S_{++-} = -1, S_{+ij} = F_ij,
/// S_{i+j} = -delta_ij - F_ij, completed by antisymmetry in the last two slots.
HomogeneousStructure appendix_structure(const PlaneWaveData &pw);

/// Coframe e^+ = dz, e^- = ds + (Q+s) dz, e^i = dx^i. Row A holds e^A_mu.
DMatrix coframe(const PlaneWaveData &pw, const ChartPoint &pt);

struct ChartStructure
{
    HomogeneousStructure coordinate; // S_{mu nu rho} and g at the point
    DMatrix coframe;
};

ChartStructure structure_at(const PlaneWaveData &pw, const ChartPoint &pt);

struct ASResiduals
{
    double r_g = 0, r_R = 0, r_S = 0, r_geo = 0;
};

/// Residuals of Dbar g, Dbar R, Dbar S (Dbar = D - S) and of D_xi xi, maximised
/// over the points. frame_s overrides the frame components of S.
ASResiduals as_residuals(const PlaneWaveData &pw, const std::vector<ChartPoint> &pts,
                         const std::optional<Tensor> &frame_s = std::nullopt);
ASResiduals as_residuals_serial(const PlaneWaveData &pw, const std::vector<ChartPoint> &pts,
                                const std::optional<Tensor> &frame_s = std::nullopt);

/// Curvature of Dbar in the light-cone frame, valence (d,d,u,d), float.
Tensor frame_curvature(const PlaneWaveData &pw, const ChartPoint &pt,
                       const std::optional<Tensor> &frame_s = std::nullopt);

/// Null boosts B_j: B_j E_+ = -E_j, B_j E_i = delta_ij E_-, B_j E_- = 0.
std::vector<QMatrix> null_boosts(int n);

/// Exact frame curvature by rational reconstruction, with the null boosts as
/// isotropy basis. pt.z must be 0 for rational profile data.
CurvatureAtPoint curvature_at(const PlaneWaveData &pw, const ChartPoint &pt,
                              const std::optional<Tensor> &frame_s = std::nullopt);

/// Labels U, V, X1..Xn, Xb1..Xbn.
std::vector<std::string> plane_wave_labels(int n);

/// The isometry algebra on {U, V, X_i, Xbar_i}:
///   [U,V] = V, [U,Xbar_i] = X_i, [X_i,X_j] = 2F_ij V, [X_i,Xbar_j] = -delta_ij V,
///   [U,X_i] = (2H - F)_ij Xbar_j + (delta + 2F)_ij X_j.
LieAlgebra pw_isometry_algebra(const PlaneWaveData &pw);

/// Seeded points uniform in [-2, 2]^D.
std::vector<ChartPoint> sample_points(int n, int count, std::uint64_t seed);

/// Random rational (F, H) with entries p/q, q in 1..4, in [-2, 2].
PlaneWaveData random_plane_wave(int n, std::uint64_t seed);

} // namespace homkit

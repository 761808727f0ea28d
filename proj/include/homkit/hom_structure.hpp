#pragma once

#include "homkit/lie_algebra.hpp"
#include "homkit/tensor.hpp"

#include <string>
#include <vector>

namespace homkit
{

/// Homogeneous-structure tensor at a point: S_XYZ = g(S_X Y, Z), all slots
/// lower, antisymmetric in the last two.
class HomogeneousStructure
{
  public:
    HomogeneousStructure(FrameMetric metric, Tensor s);

    const FrameMetric &metric() const { return metric_; }
    const Tensor &s() const { return s_; }
    int dim() const { return metric_.dim(); }

  private:
    FrameMetric metric_;
    Tensor s_;
};

struct TraceOneForm
{
    Tensor alpha; // covector, alpha_Z = g^{AB} S_ABZ / (D-1)
    Tensor xi;    // vector, raised alpha
    Scalar norm;  // alpha(xi)
};

TraceOneForm trace_one_form(const HomogeneousStructure &hs);

/// The vectorial piece g_XY a_Z - g_XZ a_Y built from a covector a.
Tensor t1_part(const FrameMetric &metric, const Tensor &alpha);

/// S = t1_part(alpha) + T for a totally antisymmetric T.
HomogeneousStructure t1_t3_structure(const FrameMetric &metric, const Tensor &alpha, const Tensor &t);

struct Decomposition
{
    Tensor s1, s2, s3;
};

Decomposition decompose(const HomogeneousStructure &hs);

enum class Degeneracy
{
    none,
    spacelike,
    timelike,
    null
};

std::string to_string(Degeneracy d);

struct StructureClass
{
    bool t1 = false, t2 = false, t3 = false;
    Degeneracy degeneracy = Degeneracy::none;
    Scalar xi_norm;

    /// "zero", "T1", "T1+T3", ...
    std::string name() const;
};

/// Exact zero tests for rational input; absolute tolerance on the max
/// component for float input.
StructureClass classify(const HomogeneousStructure &hs, double tol = 1e-10);

/// Ambrose-Singer curvature at a point. Rbar has valence (d,d,u,d) with
/// Rbar(E_A, E_B) E_D = Rbar_AB^C_D E_C. h_basis are D x D endomorphisms
/// (row = output component) spanning the isotropy algebra h'.
struct CurvatureAtPoint
{
    Tensor rbar;
    std::vector<QMatrix> h_basis;
};

/// Endomorphism Rbar(E_A, E_B) as a matrix (exact curvature only).
QMatrix curvature_endomorphism(const Tensor &rbar, int a, int b);

struct IsometryAlgebra
{
    LieAlgebra algebra;
    JacobiResult jacobi;
};

/// Algebra on m + h': [X,Y] = S_X Y - S_Y X - Rbar(X,Y), [A,X] = A X,
/// [A,B] = AB - BA. The minus sign on Rbar makes constant positive curvature
/// produce so(D+1). Labels default to e0.. and h0..
IsometryAlgebra build_isometry_algebra(const HomogeneousStructure &hs, const CurvatureAtPoint &curv,
                                       std::vector<std::string> m_labels = {},
                                       std::vector<std::string> h_labels = {});

} // namespace homkit

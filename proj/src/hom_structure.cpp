#include "homkit/hom_structure.hpp"

#include <cmath>

namespace homkit
{

namespace
{
const std::vector<Valence> kLower3{Valence::down, Valence::down, Valence::down};

bool negligible(const Tensor &t, double tol)
{
    Scalar m = max_abs(t);
    if (m.is_exact())
        return m.is_zero();
    return m.real() <= tol;
}

Scalar scalar_of(ScalarKind kind, const Rational &q)
{
    return kind == ScalarKind::exact ? Scalar(q) : Scalar(q.get_d());
}
} // namespace

HomogeneousStructure::HomogeneousStructure(FrameMetric metric, Tensor s)
    : metric_(std::move(metric)), s_(std::move(s))
{
    if (s_.rank() != 3 || s_.valence() != kLower3)
        throw InputError("S must be a rank-3 all-lower tensor");
    if (s_.dim() != metric_.dim())
        throw InputError("S and metric dimensions differ");
    if (s_.kind() != metric_.kind())
        throw TagMismatch();
    Tensor sym = s_ + permute_slots(s_, {0, 2, 1});
    if (!negligible(sym, 1e-12))
        throw InputError("S is not antisymmetric in its last two slots");
}

TraceOneForm trace_one_form(const HomogeneousStructure &hs)
{
    int d = hs.dim();
    if (d < 2)
        throw Error("trace one-form needs dimension at least 2");
    Tensor c = contract(hs.s(), 0, 1, hs.metric());
    Tensor alpha = scalar_of(c.kind(), Rational(1, d - 1)) * c;
    Tensor xi = raise_lower(alpha, 0, hs.metric());
    Tensor pair = contract(outer(alpha, xi), 0, 1);
    return TraceOneForm{alpha, xi, pair.get(std::span<const int>{})};
}

Tensor t1_part(const FrameMetric &metric, const Tensor &alpha)
{
    if (alpha.rank() != 1 || alpha.valence()[0] != Valence::down)
        throw Error("t1_part expects a covector");
    Tensor ga = outer(metric.g(), alpha);
    return ga - permute_slots(ga, {0, 2, 1});
}

HomogeneousStructure t1_t3_structure(const FrameMetric &metric, const Tensor &alpha, const Tensor &t)
{
    return HomogeneousStructure(metric, t1_part(metric, alpha) + t);
}

Decomposition decompose(const HomogeneousStructure &hs)
{
    auto tr = trace_one_form(hs);
    Tensor s1 = t1_part(hs.metric(), tr.alpha);
    Tensor s3 = antisymmetrize(hs.s(), {0, 1, 2});
    Tensor s2 = hs.s() - s1 - s3;
    return Decomposition{s1, s2, s3};
}

std::string to_string(Degeneracy d)
{
    switch (d)
    {
    case Degeneracy::none:
        return "none";
    case Degeneracy::spacelike:
        return "spacelike";
    case Degeneracy::timelike:
        return "timelike";
    case Degeneracy::null:
        return "null";
    }
    return "none";
}

std::string StructureClass::name() const
{
    std::string out;
    auto add = [&](bool on, const char *tag) {
        if (!on)
            return;
        if (!out.empty())
            out += "+";
        out += tag;
    };
    add(t1, "T1");
    add(t2, "T2");
    add(t3, "T3");
    return out.empty() ? "zero" : out;
}

StructureClass classify(const HomogeneousStructure &hs, double tol)
{
    auto parts = decompose(hs);
    auto tr = trace_one_form(hs);
    StructureClass cls;
    cls.t1 = !negligible(parts.s1, tol);
    cls.t2 = !negligible(parts.s2, tol);
    cls.t3 = !negligible(parts.s3, tol);
    cls.xi_norm = tr.norm;
    if (cls.t1)
    {
        int sign;
        if (tr.norm.is_exact())
            sign = tr.norm.sign();
        else
            sign = std::fabs(tr.norm.real()) <= tol ? 0 : (tr.norm.real() > 0 ? 1 : -1);
        cls.degeneracy = sign == 0 ? Degeneracy::null : sign > 0 ? Degeneracy::spacelike : Degeneracy::timelike;
    }
    return cls;
}

QMatrix curvature_endomorphism(const Tensor &rbar, int a, int b)
{
    int d = rbar.dim();
    const auto &v = rbar.values<Rational>();
    QMatrix m(d, d);
    for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
            m(c, e) = v[((size_t(a) * d + b) * d + c) * d + e];
    return m;
}

IsometryAlgebra build_isometry_algebra(const HomogeneousStructure &hs, const CurvatureAtPoint &curv,
                                       std::vector<std::string> m_labels,
                                       std::vector<std::string> h_labels)
{
    int d = hs.dim();
    if (!hs.s().is_exact() || !curv.rbar.is_exact())
        throw Error("isometry algebra reconstruction needs exact S and curvature");
    const std::vector<Valence> rv{Valence::down, Valence::down, Valence::up, Valence::down};
    if (curv.rbar.dim() != d || curv.rbar.valence() != rv)
        throw InputError("curvature must be a (d,d,u,d) tensor of the structure's dimension");
    if (!(curv.rbar + permute_slots(curv.rbar, {1, 0, 2, 3})).is_zero())
        throw InputError("curvature is not antisymmetric in its 2-form slots");

    QMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            g(i, j) = hs.metric().g().values<Rational>()[size_t(i) * d + j];
    for (size_t k = 0; k < curv.h_basis.size(); ++k)
    {
        const QMatrix &a = curv.h_basis[k];
        if (a.rows() != d || a.cols() != d)
            throw InputError("isotropy matrix " + std::to_string(k) + " has the wrong shape");
        if (!(a.transpose() * g + g * a).is_zero())
            throw InputError("isotropy matrix " + std::to_string(k) + " is not g-antisymmetric");
    }

    if (m_labels.empty())
        m_labels = LieAlgebra::default_labels(d);
    if (h_labels.empty())
        for (size_t k = 0; k < curv.h_basis.size(); ++k)
            h_labels.push_back("h" + std::to_string(k));

    // S_A E_B = S_AB^C E_C
    Tensor s_up = raise_lower(hs.s(), 2, hs.metric());
    const auto &su = s_up.values<Rational>();

    ReductiveData data;
    data.m_labels = m_labels;
    data.h_labels = h_labels;
    data.h_basis = curv.h_basis;
    data.mm.assign(size_t(d) * d * d, Rational(0));
    data.mm_h.assign(size_t(d) * d, QMatrix());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
        {
            for (int c = 0; c < d; ++c)
                data.mm[(size_t(a) * d + b) * d + c] =
                    su[(size_t(a) * d + b) * d + c] - su[(size_t(b) * d + a) * d + c];
            QMatrix r = curvature_endomorphism(curv.rbar, a, b);
            data.mm_h[size_t(a) * d + b] = Rational(-1) * r;
        }
    LieAlgebra alg = assemble_reductive(data);
    JacobiResult j = jacobi_residual(alg);
    return IsometryAlgebra{std::move(alg), std::move(j)};
}

} // namespace homkit

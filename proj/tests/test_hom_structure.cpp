#include "homkit/hom_structure.hpp"
#include "homkit/plane_wave.hpp"
#include "homkit/random.hpp"

#include <doctest.h>

using namespace homkit;

namespace
{
const auto d = Valence::down;

Tensor random_tensor(int dim, std::vector<Valence> val, Rng &rng)
{
    Tensor t(dim, val, ScalarKind::exact);
    for (auto &v : t.values<Rational>())
        v = random_rational(rng);
    return t;
}

Tensor random_structure_tensor(int dim, Rng &rng)
{
    Tensor t = random_tensor(dim, {d, d, d}, rng);
    return t - permute_slots(t, {0, 2, 1});
}

QMatrix metric_matrix(const FrameMetric &g)
{
    QMatrix m(g.dim(), g.dim());
    m.data() = g.g().values<Rational>();
    return m;
}

Rational full_pairing(const Tensor &a, const Tensor &b, const FrameMetric &g)
{
    Tensor t = outer(a, b);
    t = contract(t, 0, 3, g);
    t = contract(t, 0, 2, g);
    t = contract(t, 0, 1, g);
    return t.get({}).rational();
}

PlaneWaveData sample_pw(bool with_f)
{
    QMatrix f(2, 2), h(2, 2);
    if (with_f)
    {
        f(0, 1) = Rational(2, 3);
        f(1, 0) = Rational(-2, 3);
    }
    h(0, 0) = 1;
    h(1, 1) = Rational(-1, 2);
    return PlaneWaveData(2, f, h);
}
} // namespace

TEST_CASE("structure tensor must be antisymmetric in its last slots")
{
    Tensor s(3, {d, d, d}, ScalarKind::exact);
    s.set({0, 1, 2}, Scalar(1));
    CHECK_THROWS_AS(HomogeneousStructure(FrameMetric::euclidean(3), s), InputError);
    Tensor v(3, {d, d}, ScalarKind::exact);
    CHECK_THROWS_AS(HomogeneousStructure(FrameMetric::euclidean(3), v), InputError);
}

TEST_CASE("trace_one_form")
{
    HomogeneousStructure zero(FrameMetric::euclidean(3), Tensor(3, {d, d, d}, ScalarKind::exact));
    auto t0 = trace_one_form(zero);
    CHECK(t0.alpha.is_zero());
    CHECK(t0.norm.is_zero());

    auto hs = appendix_structure(sample_pw(true));
    auto t = trace_one_form(hs);
    CHECK(t.alpha.get({0}).rational() == 1);
    for (int z = 1; z < 4; ++z)
        CHECK(t.alpha.get({z}).rational() == 0);
    CHECK(t.xi.get({1}).rational() == 1);
    CHECK(t.xi.get({0}).rational() == 0);
    CHECK(t.norm.rational() == 0);

    Tensor phi(3, {d}, ScalarKind::exact);
    phi.set({0}, Scalar(Rational(1, 2)));
    phi.set({2}, Scalar(Rational(-3)));
    auto g = FrameMetric::euclidean(3);
    auto pure = trace_one_form(HomogeneousStructure(g, t1_part(g, phi)));
    CHECK(pure.alpha == phi);
    CHECK(pure.norm.rational() == Rational(37, 4));

    CHECK_THROWS_AS(trace_one_form(HomogeneousStructure(FrameMetric::euclidean(1),
                                                        Tensor(1, {d, d, d}, ScalarKind::exact))),
                    Error);
}

TEST_CASE("decompose: totally antisymmetric input is pure T3")
{
    Rng rng(1);
    Tensor t = antisymmetrize(random_tensor(4, {d, d, d}, rng), {0, 1, 2});
    auto dec = decompose(HomogeneousStructure(FrameMetric::light_cone(2), t));
    CHECK(dec.s1.is_zero());
    CHECK(dec.s2.is_zero());
    CHECK(dec.s3 == t);
}

TEST_CASE("decompose: plane-wave structure, hand-computed pieces")
{
    auto pw = sample_pw(true);
    auto dec = decompose(appendix_structure(pw));
    const int P = 0, M = 1;
    int n = 2;
    Tensor s1(4, {d, d, d}, ScalarKind::exact), s3(4, {d, d, d}, ScalarKind::exact);
    auto put = [](Tensor &t, int x, int y, int z, const Rational &v) {
        t.set({x, y, z}, Scalar(Rational(t.get({x, y, z}).rational() + v)));
        t.set({x, z, y}, Scalar(Rational(t.get({x, z, y}).rational() - v)));
    };
    put(s1, P, P, M, -1);
    for (int i = 0; i < n; ++i)
    {
        put(s1, 2 + i, P, 2 + i, -1);
        for (int j = 0; j < n; ++j)
        {
            if (i >= j)
                continue;
            // T_{+ij} = F_ij, T_{i+j} = -F_ij, T_{ij+} = F_ij, extended antisymmetrically.
            put(s3, P, 2 + i, 2 + j, pw.F(i, j));
            put(s3, 2 + i, P, 2 + j, -pw.F(i, j));
            put(s3, 2 + j, P, 2 + i, pw.F(i, j));
        }
    }
    CHECK(dec.s1 == s1);
    CHECK(dec.s3 == s3);
    CHECK(dec.s2.is_zero());
}

TEST_CASE("decompose: T1 + T3 inputs round-trip")
{
    Rng rng(12);
    auto g = FrameMetric::light_cone(2);
    for (int rep = 0; rep < 10; ++rep)
    {
        Tensor phi = random_tensor(4, {d}, rng);
        Tensor t = antisymmetrize(random_tensor(4, {d, d, d}, rng), {0, 1, 2});
        auto hs = t1_t3_structure(g, phi, t);
        auto dec = decompose(hs);
        CHECK(dec.s1 == t1_part(g, phi));
        CHECK(dec.s2.is_zero());
        CHECK(dec.s3 == t);
        CHECK(trace_one_form(hs).alpha == phi);
    }
}

TEST_CASE("decompose: invariants on random structures")
{
    Rng rng(77);
    for (int rep = 0; rep < 20; ++rep)
    {
        int dim = 2 + rep % 4;
        QMatrix gm = QMatrix::identity(dim);
        if (rep % 2)
            gm(0, 0) = -1;
        FrameMetric g(gm);
        HomogeneousStructure hs(g, random_structure_tensor(dim, rng));
        auto dec = decompose(hs);
        CHECK(dec.s1 + dec.s2 + dec.s3 == hs.s());
        CHECK(contract(dec.s2, 0, 1, g).is_zero());
        CHECK(contract(dec.s3, 0, 1, g).is_zero());
        CHECK(antisymmetrize(dec.s3, {0, 1, 2}) == dec.s3);
        // Cyclic sum of S2 vanishes.
        Tensor cyc = dec.s2 + permute_slots(dec.s2, {1, 2, 0}) + permute_slots(dec.s2, {2, 0, 1});
        CHECK(cyc.is_zero());
        CHECK(full_pairing(dec.s1, dec.s2, g) == 0);
        CHECK(full_pairing(dec.s1, dec.s3, g) == 0);
        CHECK(full_pairing(dec.s2, dec.s3, g) == 0);
        auto again = decompose(HomogeneousStructure(g, dec.s2));
        CHECK(again.s2 == dec.s2);
        CHECK(again.s1.is_zero());
        CHECK(again.s3.is_zero());
    }
}

TEST_CASE("classify")
{
    HomogeneousStructure zero(FrameMetric::light_cone(1), Tensor(3, {d, d, d}, ScalarKind::exact));
    CHECK(classify(zero).name() == "zero");

    auto full = classify(appendix_structure(sample_pw(true)));
    CHECK(full.name() == "T1+T3");
    CHECK(full.degeneracy == Degeneracy::null);
    CHECK(full.xi_norm.rational() == 0);

    auto static_case = classify(appendix_structure(sample_pw(false)));
    CHECK(static_case.name() == "T1");
    CHECK(static_case.degeneracy == Degeneracy::null);

    auto g = FrameMetric::euclidean(3);
    Tensor phi(3, {d}, ScalarKind::exact);
    phi.set({1}, Scalar(2));
    auto space = classify(HomogeneousStructure(g, t1_part(g, phi)));
    CHECK(space.name() == "T1");
    CHECK(space.degeneracy == Degeneracy::spacelike);

    QMatrix mink = QMatrix::identity(3);
    mink(0, 0) = -1;
    FrameMetric gm(mink);
    Tensor tau(3, {d}, ScalarKind::exact);
    tau.set({0}, Scalar(1));
    CHECK(classify(HomogeneousStructure(gm, t1_part(gm, tau))).degeneracy == Degeneracy::timelike);

    Rng rng(5);
    auto generic = classify(HomogeneousStructure(g, random_structure_tensor(3, rng)));
    CHECK(generic.t2);
}

TEST_CASE("classify is invariant under frame changes preserving the metric")
{
    // Null boost rescaling E+ -> 2 E+, E- -> E-/2 and a rational rotation in the transverse plane.
    QMatrix p(4, 4);
    p(0, 0) = 2;
    p(1, 1) = Rational(1, 2);
    p(2, 2) = Rational(3, 5);
    p(3, 2) = Rational(4, 5);
    p(2, 3) = Rational(-4, 5);
    p(3, 3) = Rational(3, 5);
    auto g = FrameMetric::light_cone(2);
    auto gp = change_frame(g.g(), p);
    CHECK(gp == g.g());
    Rng rng(3);
    for (int rep = 0; rep < 5; ++rep)
    {
        HomogeneousStructure hs(g, random_structure_tensor(4, rng));
        HomogeneousStructure moved(g, change_frame(hs.s(), p));
        CHECK(classify(hs).name() == classify(moved).name());
        CHECK(classify(hs).degeneracy == classify(moved).degeneracy);
    }
    auto a = appendix_structure(sample_pw(true));
    CHECK(classify(HomogeneousStructure(g, change_frame(a.s(), p))).name() == "T1+T3");
}

TEST_CASE("T1+T3 identity S_X xi = T_X xi + alpha(X) xi - alpha(xi) X")
{
    Rng rng(31);
    auto g = FrameMetric::light_cone(2);
    for (int rep = 0; rep < 5; ++rep)
    {
        auto hs = t1_t3_structure(g, random_tensor(4, {d}, rng),
                                  antisymmetrize(random_tensor(4, {d, d, d}, rng), {0, 1, 2}));
        auto tr = trace_one_form(hs);
        auto dec = decompose(hs);
        for (int x = 0; x < 4; ++x)
            for (int z = 0; z < 4; ++z)
            {
                Rational lhs = 0, tx = 0;
                for (int y = 0; y < 4; ++y)
                {
                    lhs += hs.s().get({x, y, z}).rational() * tr.xi.get({y}).rational();
                    tx += dec.s3.get({x, y, z}).rational() * tr.xi.get({y}).rational();
                }
                Rational rhs = tx + tr.alpha.get({x}).rational() * tr.alpha.get({z}).rational() -
                               tr.norm.rational() * g.g().get({x, z}).rational();
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("build_isometry_algebra: flat and round examples")
{
    auto g2 = FrameMetric::euclidean(2);
    HomogeneousStructure flat(g2, Tensor(2, {d, d, d}, ScalarKind::exact));
    CurvatureAtPoint none{Tensor(2, {d, d, Valence::up, d}, ScalarKind::exact), {}};
    auto ab = build_isometry_algebra(flat, none);
    CHECK(ab.algebra.dim() == 2);
    CHECK(ab.algebra.structure().is_zero());

    // Unit sphere curvature R_ABCD = g_AC g_BD - g_AD g_BC.
    Tensor r(2, {d, d, Valence::up, d}, ScalarKind::exact);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int e = 0; e < 2; ++e)
                    r.set({a, b, c, e}, Scalar(Rational((a == c) * (b == e) - (a == e) * (b == c))));
    QMatrix rot(2, 2);
    rot(0, 1) = 1, rot(1, 0) = -1;
    auto sphere = build_isometry_algebra(flat, {r, {rot}});
    CHECK(sphere.jacobi.vanishes());
    const auto &l = sphere.algebra;
    REQUIRE(l.dim() == 3);
    // Killing form oracle: so(3) is the compact form, negative definite.
    QMatrix k(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int e = 0; e < 3; ++e)
                    k(a, b) += l.coeff(a, c, e) * l.coeff(b, e, c);
    CHECK(k(0, 0) < 0);
    CHECK(k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0) > 0);
    Rational det = k(0, 0) * (k(1, 1) * k(2, 2) - k(1, 2) * k(2, 1)) -
                   k(0, 1) * (k(1, 0) * k(2, 2) - k(1, 2) * k(2, 0)) +
                   k(0, 2) * (k(1, 0) * k(2, 1) - k(1, 1) * k(2, 0));
    CHECK(det < 0);
}

TEST_CASE("build_isometry_algebra errors")
{
    auto g2 = FrameMetric::euclidean(2);
    HomogeneousStructure flat(g2, Tensor(2, {d, d, d}, ScalarKind::exact));
    Tensor r(2, {d, d, Valence::up, d}, ScalarKind::exact);
    r.set({0, 1, 0, 1}, Scalar(1));
    r.set({0, 1, 1, 0}, Scalar(-1));
    r.set({1, 0, 0, 1}, Scalar(-1));
    r.set({1, 0, 1, 0}, Scalar(1));
    CHECK_THROWS_AS(build_isometry_algebra(flat, {r, {}}), Error);

    auto g3 = FrameMetric::euclidean(3);
    HomogeneousStructure flat3(g3, Tensor(3, {d, d, d}, ScalarKind::exact));
    QMatrix a(3, 3), b(3, 3);
    a(0, 1) = 1, a(1, 0) = -1;
    b(1, 2) = 1, b(2, 1) = -1;
    CHECK_THROWS_AS(build_isometry_algebra(flat3, {Tensor(3, {d, d, Valence::up, d}, ScalarKind::exact), {a, b}}),
                    Error);
    QMatrix sym(3, 3);
    sym(0, 1) = sym(1, 0) = 1;
    CHECK_THROWS_AS(build_isometry_algebra(flat3, {Tensor(3, {d, d, Valence::up, d}, ScalarKind::exact), {sym}}),
                    Error);
}

#include "homkit/lie_algebra.hpp"
#include "homkit/plane_wave.hpp"
#include "homkit/random.hpp"

#include <doctest.h>

using namespace homkit;

namespace
{
LieAlgebra so3()
{
    BracketTable t(3);
    t.set(0, 1, 2, 1);
    t.set(1, 2, 0, 1);
    t.set(2, 0, 1, 1);
    return t.build();
}

// Independent oracle: evaluate [[x,y],z] + cyclic on basis vectors through an
// explicit bracket of coordinate vectors.
std::vector<Rational> bracket(const LieAlgebra &l, const std::vector<Rational> &x, const std::vector<Rational> &y)
{
    int n = l.dim();
    std::vector<Rational> out(n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (sgn(x[a]) != 0 && sgn(y[b]) != 0)
                for (int c = 0; c < n; ++c)
                    out[c] += x[a] * y[b] * l.coeff(a, b, c);
    return out;
}

Rational oracle_jacobi(const LieAlgebra &l)
{
    int n = l.dim();
    Rational worst = 0;
    auto e = [&](int i) {
        std::vector<Rational> v(n, Rational(0));
        v[i] = 1;
        return v;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
            {
                auto j1 = bracket(l, bracket(l, e(a), e(b)), e(c));
                auto j2 = bracket(l, bracket(l, e(b), e(c)), e(a));
                auto j3 = bracket(l, bracket(l, e(c), e(a)), e(b));
                for (int k = 0; k < n; ++k)
                    worst = std::max(worst, Rational(abs(j1[k] + j2[k] + j3[k])));
            }
    return worst;
}

LieAlgebra random_algebra(int d, std::uint64_t seed)
{
    Rng rng(seed);
    BracketTable t(d);
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            for (int c = 0; c < d; ++c)
                if (rng() % 2)
                    t.set(a, b, c, random_rational(rng));
    return t.build();
}
} // namespace

TEST_CASE("jacobi: classical algebras vanish")
{
    CHECK(jacobi_residual(so3()).vanishes());
    BracketTable heis(3);
    heis.set(0, 1, 2, 1);
    CHECK(jacobi_residual(heis.build()).vanishes());
    CHECK(jacobi_residual(LieAlgebra::abelian(4)).vanishes());
}

TEST_CASE("jacobi: the non-Lie example has J_123^3 = -1")
{
    BracketTable t(3);
    t.set(0, 1, 2, 1);
    t.set(0, 2, 0, 1);
    auto jr = jacobi_residual(t.build());
    CHECK_FALSE(jr.vanishes());
    CHECK(jr.residual.get({0, 1, 2, 2}).rational() == -1);
}

TEST_CASE("jacobi: parallel, serial and the naive oracle agree")
{
    for (std::uint64_t s = 1; s <= 6; ++s)
    {
        auto l = random_algebra(5, s);
        auto par = jacobi_residual(l), ser = jacobi_residual_serial(l);
        CHECK(par.residual == ser.residual);
        CHECK(par.max_abs.rational() == oracle_jacobi(l));
    }
}

TEST_CASE("jacobi: plane-wave algebras are Lie algebras")
{
    for (int n = 1; n <= 4; ++n)
        for (std::uint64_t s = 1; s <= 3; ++s)
        {
            auto l = pw_isometry_algebra(random_plane_wave(n, s));
            CHECK(jacobi_residual(l).vanishes());
            CHECK(oracle_jacobi(l) == 0);
        }
}

TEST_CASE("structure constants must be antisymmetric")
{
    Tensor f(2, {Valence::down, Valence::down, Valence::up}, ScalarKind::exact);
    f.set({0, 1, 0}, Scalar(1));
    CHECK_THROWS_AS(LieAlgebra({"a", "b"}, f), InputError);
    f.set({1, 0, 0}, Scalar(-1));
    CHECK_NOTHROW(LieAlgebra({"a", "b"}, f));
}

TEST_CASE("change_basis")
{
    auto l = so3();
    CHECK(change_basis(l, QMatrix::identity(3), l.labels()).structure() == l.structure());

    QMatrix swap(3, 3);
    swap(0, 1) = swap(1, 0) = swap(2, 2) = 1;
    auto s = change_basis(l, swap, {"e1", "e0", "e2"});
    // [e1', e0'] = [e0, e1] = e2
    CHECK(s.coeff(1, 0, 2) == 1);
    CHECK(s.coeff(0, 1, 2) == -1);

    // Rows of P are the new generators: X'_1 = 2 X_1.
    QMatrix p = QMatrix::identity(3);
    p(0, 0) = 2;
    auto d = change_basis(l, p, l.labels());
    CHECK(d.coeff(0, 1, 2) == 2);
    CHECK(d.coeff(1, 2, 0) == Rational(1, 2));
    CHECK(d.coeff(2, 0, 1) == 2);
    CHECK(jacobi_residual(d).vanishes());

    CHECK_THROWS_AS(change_basis(l, QMatrix(3, 3), l.labels()), Error);
}

TEST_CASE("change_basis preserves Jacobi vanishing both ways")
{
    Rng rng(3);
    auto good = pw_isometry_algebra(random_plane_wave(2, 4));
    auto bad = random_algebra(6, 8);
    for (int rep = 0; rep < 5; ++rep)
    {
        QMatrix p = QMatrix::identity(6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (i != j && rng() % 3 == 0)
                    p(i, j) = random_rational(rng);
        if (!inverse(p))
            continue;
        CHECK(jacobi_residual(change_basis(good, p, good.labels())).vanishes());
        CHECK_FALSE(jacobi_residual(change_basis(bad, p, bad.labels())).vanishes());
    }
}

TEST_CASE("check_reductive")
{
    auto ab = LieAlgebra::abelian(3);
    auto r0 = check_reductive(ab, {{0, 1}, {2}});
    CHECK(r0.reductive);
    CHECK(r0.h_prime.empty());

    auto r1 = check_reductive(so3(), {{0, 1}, {2}});
    CHECK(r1.reductive);
    REQUIRE(r1.h_prime.size() == 1);
    CHECK(r1.h_prime[0] == std::vector<Rational>{0, 0, 1});

    // The plane-wave split m = {U,V,X_i}, h = {Xbar_i} is reductive: [Xbar_i, U] = -X_i lies in m.
    auto pw = pw_isometry_algebra(random_plane_wave(2, 1));
    auto r2 = check_reductive(pw, {{0, 1, 2, 3}, {4, 5}});
    CHECK(r2.reductive);

    // span(e0,e1) is not a subalgebra of so(3).
    auto r3 = check_reductive(so3(), {{2}, {0, 1}});
    CHECK_FALSE(r3.reductive);
    CHECK_FALSE(r3.violations.empty());

    CHECK_THROWS_AS(check_reductive(so3(), {{0, 1}, {1, 2}}), InputError);
    CHECK_THROWS_AS(check_reductive(so3(), {{0}, {1}}), InputError);
}

TEST_CASE("lie_closure spans so(3) from two generators")
{
    QMatrix a(3, 3), b(3, 3);
    a(0, 1) = 1, a(1, 0) = -1;
    b(1, 2) = 1, b(2, 1) = -1;
    CHECK(lie_closure({a, b}).size() == 3);
    CHECK(lie_closure({a, Rational(2) * a}).size() == 1);
}

TEST_CASE("assemble_reductive rejects brackets outside h")
{
    ReductiveData data;
    data.m_labels = {"x", "y"};
    data.h_labels = {"A"};
    QMatrix rot(2, 2);
    rot(0, 1) = 1, rot(1, 0) = -1;
    data.h_basis = {rot};
    data.mm.assign(8, Rational(0));
    QMatrix other(2, 2);
    other(0, 0) = 1;
    data.mm_h = {QMatrix(), other, Rational(-1) * other, QMatrix()};
    CHECK_THROWS_AS(assemble_reductive(data), Error);
    data.mm_h = {QMatrix(), rot, Rational(-1) * rot, QMatrix()};
    auto l = assemble_reductive(data);
    CHECK(l.dim() == 3);
    CHECK(jacobi_residual(l).vanishes());
}

#include "homkit/hom_structure.hpp"
#include "homkit/lie_algebra.hpp"
#include "homkit/plane_wave.hpp"
#include "homkit/random.hpp"
#include "homkit/reduction.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace homkit;

namespace
{
const auto d = Valence::down;

int failures = 0;

void report(int id, const std::string &title, const std::function<std::string(bool &)> &body)
{
    bool ok = true;
    std::string detail;
    try
    {
        detail = body(ok);
    }
    catch (const std::exception &e)
    {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!ok)
        ++failures;
    std::printf("criterion %d %s: %s (%s)\n", id, ok ? "PASS" : "FAIL", title.c_str(), detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

QMatrix antisym_matrix(int n, Rng &rng)
{
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
        {
            m(i, j) = random_rational(rng);
            m(j, i) = -m(i, j);
        }
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

FrameMetric random_metric(int dim, Rng &rng)
{
    int kind = std::uniform_int_distribution<int>(0, 2)(rng);
    if (kind == 0 && dim >= 3)
        return FrameMetric::light_cone(dim - 2);
    QMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
    {
        Rational v = random_rational(rng);
        while (is_zero(v))
            v = random_rational(rng);
        g(i, i) = kind == 1 ? Rational(i == 0 ? -1 : 1) : v;
    }
    return FrameMetric(g);
}

Rational max_entry(const Tensor &t) { return max_abs(t).rational(); }
} // namespace

int main()
{
    report(1, "plane-wave structure is parallel (n = 1..3, 5 seeds, 10 points)", [](bool &ok) {
        auto t0 = std::chrono::steady_clock::now();
        ASResiduals worst;
        for (int n = 1; n <= 3; ++n)
            for (int s = 0; s < 5; ++s)
            {
                auto pw = random_plane_wave(n, 1000 + 10 * n + s);
                auto r = as_residuals(pw, sample_points(n, 10, 2000 + 10 * n + s));
                worst.r_g = std::max(worst.r_g, r.r_g);
                worst.r_R = std::max(worst.r_R, r.r_R);
                worst.r_S = std::max(worst.r_S, r.r_S);
                worst.r_geo = std::max(worst.r_geo, r.r_geo);
            }
        double secs = seconds_since(t0);
        ok = worst.r_g < 1e-10 && worst.r_S < 1e-10 && worst.r_geo < 1e-10 && worst.r_R < 1e-8 && secs < 30;
        char buf[200];
        std::snprintf(buf, sizeof buf, "max r_g %.2e, r_R %.2e, r_S %.2e, r_geo %.2e, %.2f s", worst.r_g, worst.r_R,
                      worst.r_S, worst.r_geo, secs);
        return std::string(buf);
    });

    report(2, "plane-wave structure classifies as T1+T3 null, T1 null when F = 0", [](bool &ok) {
        std::string detail;
        for (int n = 1; n <= 3; ++n)
            for (int s = 0; s < 3; ++s)
            {
                auto pw = random_plane_wave(n, 300 + 10 * n + s);
                if (n >= 2 && pw.F.is_zero())
                    pw.F(0, 1) = 1, pw.F(1, 0) = -1;
                auto c = classify(appendix_structure(pw));
                bool want_t3 = !pw.F.is_zero();
                ok = ok && c.t1 && !c.t2 && c.t3 == want_t3 && c.degeneracy == Degeneracy::null &&
                     c.xi_norm.is_exact() && c.xi_norm.is_zero();
                auto c0 = classify(appendix_structure(PlaneWaveData(n, QMatrix(n, n), pw.H)));
                ok = ok && c0.name() == "T1" && c0.degeneracy == Degeneracy::null;
                if (n == 2 && s == 0)
                    detail = c.name() + " " + to_string(c.degeneracy) + "; F = 0: " + c0.name() + " " +
                             to_string(c0.degeneracy);
            }
        return detail;
    });

    report(3, "exact decomposition on 200 random structures (D <= 5)", [](bool &ok) {
        Rng rng(33);
        int checked = 0;
        for (int k = 0; k < 200; ++k)
        {
            int dim = std::uniform_int_distribution<int>(2, 5)(rng);
            auto g = random_metric(dim, rng);
            Tensor t(dim, {d, d, d}, ScalarKind::exact);
            for (auto &v : t.values<Rational>())
                v = random_rational(rng);
            t = t - permute_slots(t, {0, 2, 1});
            HomogeneousStructure hs(g, t);
            auto dec = decompose(hs);
            bool good = dec.s1 + dec.s2 + dec.s3 == t;
            const Tensor *parts[3] = {&dec.s1, &dec.s2, &dec.s3};
            for (int p = 0; p < 3; ++p)
            {
                auto again = decompose(HomogeneousStructure(g, *parts[p]));
                const Tensor *q[3] = {&again.s1, &again.s2, &again.s3};
                for (int r = 0; r < 3; ++r)
                    good = good && (r == p ? *q[r] == *parts[p] : q[r]->is_zero());
                for (int r = p + 1; r < 3; ++r)
                    good = good && is_zero(full_pairing(*parts[p], *parts[r], g));
            }
            ok = ok && good;
            checked += good;
        }
        return std::to_string(checked) + "/200 exact";
    });

    report(4, "plane-wave isometry algebra satisfies Jacobi (50 instances, n <= 4)", [](bool &ok) {
        int zero = 0, detected = 0;
        for (int k = 0; k < 50; ++k)
        {
            int n = 1 + k % 4;
            auto alg = pw_isometry_algebra(random_plane_wave(n, 400 + k));
            zero += jacobi_residual(alg).vanishes();
            Tensor f = alg.structure();
            Rational delta(1, 1000);
            f.set({0, 1, 1}, Scalar(f.get({0, 1, 1}).rational() + delta));
            f.set({1, 0, 1}, Scalar(f.get({1, 0, 1}).rational() - delta));
            detected += !jacobi_residual(LieAlgebra(alg.labels(), f)).vanishes();
        }
        ok = zero == 50 && detected == 50;
        return std::to_string(zero) + "/50 zero residual, " + std::to_string(detected) +
               "/50 perturbations of [U,V] detected";
    });

    report(5, "non-degenerate instances reduce to symmetric spaces (100, n = 2,3)", [](bool &ok) {
        int good = 0;
        for (int k = 0; k < 100; ++k)
        {
            int n = 2 + k % 2;
            GenerateOptions opt;
            opt.isotropy = k % 3;
            auto a = generate_nondegenerate(n, 500 + k, opt);
            auto rep = nondegenerate_reduce(a);
            bool pass = rep.verdict == Verdict::symmetric_space && rep.algebra.has_value();
            if (pass)
            {
                const auto &alg = *rep.algebra;
                // basis V, Y_1..Y_n, then h'
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < alg.dim(); ++c)
                        pass = pass && alg.coeff(0, 1 + i, c) == (c == 1 + i ? rep.lambda : Rational(0));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int c = 0; c <= n; ++c)
                            pass = pass && is_zero(alg.coeff(1 + i, 1 + j, c));
            }
            good += pass;
        }
        ok = good == 100;
        return std::to_string(good) + "/100";
    });

    report(6, "degenerate instances reduce to plane waves (100, n = 2,3, all occupancies)", [](bool &ok) {
        int reduced = 0, jac = 0, trips = 0;
        for (int k = 0; k < 100; ++k)
        {
            int n = 2 + k % 2;
            int mask = (k / 2) % (1 << n);
            GenerateOptions opt;
            opt.occupancy = std::vector<int>();
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1)
                    opt.occupancy->push_back(i);
            auto rep = degenerate_reduce(generate_degenerate(n, 600 + k, opt));
            if (rep.verdict == Verdict::plane_wave && rep.plane_wave)
            {
                ++reduced;
                jac += jacobi_residual(pw_isometry_algebra(*rep.plane_wave)).vanishes();
            }
            auto pw = random_plane_wave(n, 700 + k);
            auto back = degenerate_reduce(ansatz_from_plane_wave(pw));
            trips += back.verdict == Verdict::plane_wave && back.plane_wave && back.plane_wave->F == pw.F &&
                     back.plane_wave->H == pw.H;
        }
        ok = reduced == 100 && jac == 100 && trips == 100;
        return std::to_string(reduced) + "/100 plane_wave, " + std::to_string(jac) + "/100 zero Jacobi, " +
               std::to_string(trips) + "/100 exact round trips";
    });

    report(7, "H = F = 0 is flat (20 points)", [](bool &ok) {
        double worst = 0;
        for (int n = 1; n <= 3; ++n)
            for (const auto &pt : sample_points(n, 20, 800 + n))
                worst = std::max(worst, max_abs(riemann(PlaneWaveData::zero(n), pt)).to_double());
        ok = worst < 1e-12;
        char buf[80];
        std::snprintf(buf, sizeof buf, "max |Riemann| %.2e", worst);
        return std::string(buf);
    });

    report(8, "isometry algebra rebuilt from structure and curvature matches the bracket table", [](bool &ok) {
        int matched = 0, literal = 0, literal_expected = 0, total = 0;
        for (int n = 1; n <= 3; ++n)
            for (int s = 0; s < 4; ++s)
            {
                auto pw = random_plane_wave(n, 900 + 10 * n + s);
                auto pt = sample_points(n, 1, 950 + s)[0];
                pt.z = 0;
                auto iso = build_isometry_algebra(appendix_structure(pw), curvature_at(pw, pt));
                QMatrix f2 = pw.F * pw.F;
                auto shifted = pw_isometry_algebra(PlaneWaveData(n, pw.F, pw.H - Rational(1, 2) * f2));
                matched += iso.jacobi.vanishes() && iso.algebra.structure() == shifted.structure();
                bool lit = iso.algebra.structure() == pw_isometry_algebra(pw).structure();
                literal += lit;
                literal_expected += lit == f2.is_zero();
                ++total;
            }
        ok = matched == total && literal_expected == total;
        return std::to_string(matched) + "/" + std::to_string(total) +
               " exact matches with H replaced by H - F^2/2; literal (F, H) table matched " +
               std::to_string(literal) + "/" + std::to_string(total) + ", exactly the cases with F^2 = 0";
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}

#include "homkit/plane_wave.hpp"
#include "homkit/random.hpp"

#include <algorithm>
#include <cmath>

namespace homkit
{

namespace
{
// Dense float array over a D-dimensional index range.
struct Nd
{
    int d = 0;
    std::vector<double> v;
    Nd() = default;
    Nd(int dim, int rank) : d(dim), v(size_t(std::pow(dim, rank) + 0.5), 0.0) {}
    template <class... I> double &operator()(I... i)
    {
        size_t o = 0;
        ((o = o * d + size_t(i)), ...);
        return v[o];
    }
    template <class... I> double operator()(I... i) const
    {
        size_t o = 0;
        ((o = o * d + size_t(i)), ...);
        return v[o];
    }
};

Tensor to_tensor(const Nd &a, std::vector<Valence> val)
{
    return Tensor::from_values<double>(a.d, std::move(val), a.v);
}

Nd from_tensor(const Tensor &t)
{
    Nd a;
    a.d = t.dim();
    if (t.is_exact())
    {
        for (const auto &q : t.values<Rational>())
            a.v.push_back(q.get_d());
    }
    else
        a.v = t.values<double>();
    return a;
}

std::vector<Valence> lower(int r) { return std::vector<Valence>(size_t(r), Valence::down); }

constexpr int kZ = 0, kS = 1;
constexpr int kPlus = 0, kMinus = 1;

double quad(const DMatrix &m, const std::vector<double> &x)
{
    double q = 0;
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            q += x[i] * m(int(i), int(j)) * x[j];
    return q;
}

std::vector<double> mat_vec(const DMatrix &m, const std::vector<double> &x)
{
    std::vector<double> y(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            y[i] += m(int(i), int(j)) * x[j];
    return y;
}

// Profile Phi = g_zz = 2(Q + s) with its derivatives up to third order.
struct Profile
{
    double phi;
    Nd d1, d2, d3;
};

Profile profile(const PlaneWaveData &pw, const ChartPoint &pt)
{
    int n = pw.n, D = n + 2;
    auto m = profile_derivatives(pw, pt.z, 3);
    const auto &x = pt.x;
    Profile p{2 * (quad(m[0], x) + pt.s), Nd(D, 1), Nd(D, 2), Nd(D, 3)};
    auto m0x = mat_vec(m[0], x), m1x = mat_vec(m[1], x), m2x = mat_vec(m[2], x);

    p.d1(kZ) = 2 * quad(m[1], x);
    p.d1(kS) = 2;
    for (int i = 0; i < n; ++i)
        p.d1(2 + i) = 4 * m0x[i];

    p.d2(kZ, kZ) = 2 * quad(m[2], x);
    for (int i = 0; i < n; ++i)
    {
        p.d2(kZ, 2 + i) = p.d2(2 + i, kZ) = 4 * m1x[i];
        for (int j = 0; j < n; ++j)
            p.d2(2 + i, 2 + j) = 4 * m[0](i, j);
    }

    p.d3(kZ, kZ, kZ) = 2 * quad(m[3], x);
    for (int i = 0; i < n; ++i)
    {
        double v = 4 * m2x[i];
        p.d3(kZ, kZ, 2 + i) = p.d3(kZ, 2 + i, kZ) = p.d3(2 + i, kZ, kZ) = v;
        for (int j = 0; j < n; ++j)
        {
            double w = 4 * m[1](i, j);
            p.d3(kZ, 2 + i, 2 + j) = p.d3(2 + i, kZ, 2 + j) = p.d3(2 + i, 2 + j, kZ) = w;
        }
    }
    return p;
}

DMatrix inverse_or_throw(const DMatrix &m)
{
    auto inv = inverse(m);
    if (!inv)
        throw Error("singular metric");
    return *inv;
}

// Everything the residuals and curvature need at one point.
struct PointGeometry
{
    int D;
    Nd g, ginv, dg, ddg, dddg, dginv;
    Nd gl, dgl, ddgl;       // lowered Christoffel symbols Gamma_{s m n} and derivatives
    Nd gam, dgam;           // Gamma^r_mn and d_a Gamma^r_mn
    Nd riem, driem;         // R_{a s m n} and d_l R_{a s m n}
    Nd e, de, einv, deinv;  // coframe e^A_mu, frame vectors E_A^mu (stored einv(mu, A))
};

PointGeometry geometry(const PlaneWaveData &pw, const ChartPoint &pt)
{
    int D = pw.dim();
    if (int(pt.x.size()) != pw.n)
        throw Error("chart point has the wrong number of transverse coordinates");
    auto prof = profile(pw, pt);
    PointGeometry G;
    G.D = D;
    G.g = Nd(D, 2);
    G.dg = Nd(D, 3);
    G.ddg = Nd(D, 4);
    G.dddg = Nd(D, 5);
    G.g(kZ, kZ) = prof.phi;
    G.g(kZ, kS) = G.g(kS, kZ) = 1;
    for (int i = 2; i < D; ++i)
        G.g(i, i) = 1;
    for (int a = 0; a < D; ++a)
    {
        G.dg(a, kZ, kZ) = prof.d1(a);
        for (int b = 0; b < D; ++b)
        {
            G.ddg(a, b, kZ, kZ) = prof.d2(a, b);
            for (int c = 0; c < D; ++c)
                G.dddg(a, b, c, kZ, kZ) = prof.d3(a, b, c);
        }
    }

    DMatrix gm(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            gm(i, j) = G.g(i, j);
    DMatrix gi = inverse_or_throw(gm);
    G.ginv = Nd(D, 2);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            G.ginv(i, j) = gi(i, j);

    // d_a g^{rk} = -g^{rp} d_a g_pq g^{qk}
    G.dginv = Nd(D, 3);
    for (int a = 0; a < D; ++a)
        for (int r = 0; r < D; ++r)
            for (int k = 0; k < D; ++k)
            {
                double acc = 0;
                for (int p = 0; p < D; ++p)
                    for (int q = 0; q < D; ++q)
                        acc += G.ginv(r, p) * G.dg(a, p, q) * G.ginv(q, k);
                G.dginv(a, r, k) = -acc;
            }

    G.gl = Nd(D, 3);
    G.dgl = Nd(D, 4);
    G.ddgl = Nd(D, 5);
    for (int s = 0; s < D; ++s)
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n)
            {
                G.gl(s, m, n) = 0.5 * (G.dg(m, n, s) + G.dg(n, m, s) - G.dg(s, m, n));
                for (int a = 0; a < D; ++a)
                {
                    G.dgl(a, s, m, n) = 0.5 * (G.ddg(a, m, n, s) + G.ddg(a, n, m, s) - G.ddg(a, s, m, n));
                    for (int b = 0; b < D; ++b)
                        G.ddgl(a, b, s, m, n) =
                            0.5 * (G.dddg(a, b, m, n, s) + G.dddg(a, b, n, m, s) - G.dddg(a, b, s, m, n));
                }
            }

    G.gam = Nd(D, 3);
    G.dgam = Nd(D, 4);
    for (int r = 0; r < D; ++r)
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n)
            {
                double acc = 0;
                for (int s = 0; s < D; ++s)
                    acc += G.ginv(r, s) * G.gl(s, m, n);
                G.gam(r, m, n) = acc;
                for (int a = 0; a < D; ++a)
                {
                    double d = 0;
                    for (int s = 0; s < D; ++s)
                        d += G.dginv(a, r, s) * G.gl(s, m, n) + G.ginv(r, s) * G.dgl(a, s, m, n);
                    G.dgam(a, r, m, n) = d;
                }
            }

    // R_{a s m n} = d_m G_{a n s} - d_n G_{a m s} - G_{r m a} G^r_{n s} + G_{r n a} G^r_{m s}
    G.riem = Nd(D, 4);
    G.driem = Nd(D, 5);
    for (int a = 0; a < D; ++a)
        for (int s = 0; s < D; ++s)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n)
                {
                    double r = G.dgl(m, a, n, s) - G.dgl(n, a, m, s);
                    for (int p = 0; p < D; ++p)
                        r += -G.gl(p, m, a) * G.gam(p, n, s) + G.gl(p, n, a) * G.gam(p, m, s);
                    G.riem(a, s, m, n) = r;
                    for (int l = 0; l < D; ++l)
                    {
                        double dr = G.ddgl(l, m, a, n, s) - G.ddgl(l, n, a, m, s);
                        for (int p = 0; p < D; ++p)
                            dr += -G.dgl(l, p, m, a) * G.gam(p, n, s) - G.gl(p, m, a) * G.dgam(l, p, n, s) +
                                  G.dgl(l, p, n, a) * G.gam(p, m, s) + G.gl(p, n, a) * G.dgam(l, p, m, s);
                        G.driem(l, a, s, m, n) = dr;
                    }
                }

    // Coframe and frame vectors; only e^-_z = Phi/2 varies.
    G.e = Nd(D, 2);
    G.de = Nd(D, 3);
    G.e(kPlus, kZ) = 1;
    G.e(kMinus, kS) = 1;
    G.e(kMinus, kZ) = 0.5 * prof.phi;
    for (int i = 2; i < D; ++i)
        G.e(i, i) = 1;
    for (int l = 0; l < D; ++l)
        G.de(l, kMinus, kZ) = 0.5 * prof.d1(l);
    DMatrix em(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            em(i, j) = G.e(i, j);
    DMatrix ei = inverse_or_throw(em);
    G.einv = Nd(D, 2);
    G.deinv = Nd(D, 3);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            G.einv(i, j) = ei(i, j);
    for (int l = 0; l < D; ++l)
        for (int mu = 0; mu < D; ++mu)
            for (int A = 0; A < D; ++A)
            {
                double acc = 0;
                for (int B = 0; B < D; ++B)
                    for (int nu = 0; nu < D; ++nu)
                        acc += G.einv(mu, B) * G.de(l, B, nu) * G.einv(nu, A);
                G.deinv(l, mu, A) = -acc;
            }
    return G;
}

// Coordinate components of a constant frame tensor S_ABC and their derivatives.
void coordinate_structure(const PointGeometry &G, const Nd &sf, Nd &s, Nd &ds)
{
    int D = G.D;
    s = Nd(D, 3);
    ds = Nd(D, 4);
    // Contract slot by slot: S_{mu B C}, S_{mu nu C}, S_{mu nu rho}
    Nd t1(D, 3), t2(D, 3);
    for (int mu = 0; mu < D; ++mu)
        for (int B = 0; B < D; ++B)
            for (int C = 0; C < D; ++C)
            {
                double acc = 0;
                for (int A = 0; A < D; ++A)
                    acc += G.e(A, mu) * sf(A, B, C);
                t1(mu, B, C) = acc;
            }
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu)
            for (int C = 0; C < D; ++C)
            {
                double acc = 0;
                for (int B = 0; B < D; ++B)
                    acc += G.e(B, nu) * t1(mu, B, C);
                t2(mu, nu, C) = acc;
            }
    for (int mu = 0; mu < D; ++mu)
        for (int nu = 0; nu < D; ++nu)
            for (int rho = 0; rho < D; ++rho)
            {
                double acc = 0;
                for (int C = 0; C < D; ++C)
                    acc += G.e(C, rho) * t2(mu, nu, C);
                s(mu, nu, rho) = acc;
            }
    // Product rule; at most one coframe entry has a nonzero derivative.
    for (int l = 0; l < D; ++l)
        for (int mu = 0; mu < D; ++mu)
            for (int nu = 0; nu < D; ++nu)
                for (int rho = 0; rho < D; ++rho)
                {
                    double acc = 0;
                    for (int A = 0; A < D; ++A)
                        for (int B = 0; B < D; ++B)
                            for (int C = 0; C < D; ++C)
                            {
                                double v = sf(A, B, C);
                                if (v == 0)
                                    continue;
                                acc += v * (G.de(l, A, mu) * G.e(B, nu) * G.e(C, rho) +
                                            G.e(A, mu) * G.de(l, B, nu) * G.e(C, rho) +
                                            G.e(A, mu) * G.e(B, nu) * G.de(l, C, rho));
                            }
                    ds(l, mu, nu, rho) = acc;
                }
}

// Gbar^r_{mn} = Gamma^r_{mn} - S_{mn}^r and its derivatives.
void connection_bar(const PointGeometry &G, const Nd &s, const Nd &ds, Nd &gb, Nd &dgb)
{
    int D = G.D;
    gb = Nd(D, 3);
    dgb = Nd(D, 4);
    for (int r = 0; r < D; ++r)
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n)
            {
                double su = 0;
                for (int k = 0; k < D; ++k)
                    su += G.ginv(r, k) * s(m, n, k);
                gb(r, m, n) = G.gam(r, m, n) - su;
                for (int l = 0; l < D; ++l)
                {
                    double dsu = 0;
                    for (int k = 0; k < D; ++k)
                        dsu += G.dginv(l, r, k) * s(m, n, k) + G.ginv(r, k) * ds(l, m, n, k);
                    dgb(l, r, m, n) = G.dgam(l, r, m, n) - dsu;
                }
            }
}

Nd frame_structure_values(const PlaneWaveData &pw, const std::optional<Tensor> &frame_s)
{
    if (frame_s)
    {
        if (frame_s->dim() != pw.dim() || frame_s->rank() != 3)
            throw Error("frame structure override has the wrong shape");
        return from_tensor(*frame_s);
    }
    return from_tensor(appendix_structure(pw).s());
}

// Frame xi^A from the trace of the frame structure against eta.
std::vector<double> frame_xi(const Nd &sf, int D)
{
    // eta^{+-} = 1, eta^{ij} = delta
    auto eta = [](int a, int b) {
        if ((a == kPlus && b == kMinus) || (a == kMinus && b == kPlus))
            return 1.0;
        return (a == b && a >= 2) ? 1.0 : 0.0;
    };
    std::vector<double> alpha(D, 0.0), xi(D, 0.0);
    for (int c = 0; c < D; ++c)
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b)
                alpha[c] += eta(a, b) * sf(a, b, c) / double(D - 1);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
            xi[a] += eta(a, b) * alpha[b];
    return xi;
}

ASResiduals point_residuals(const PlaneWaveData &pw, const ChartPoint &pt, const Nd &sf)
{
    auto G = geometry(pw, pt);
    int D = G.D;
    Nd s, ds, gb, dgb;
    coordinate_structure(G, sf, s, ds);
    connection_bar(G, s, ds, gb, dgb);
    ASResiduals r;

    for (int l = 0; l < D; ++l)
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n)
            {
                double v = G.dg(l, m, n);
                for (int k = 0; k < D; ++k)
                    v -= gb(k, l, m) * G.g(k, n) + gb(k, l, n) * G.g(m, k);
                r.r_g = std::max(r.r_g, std::fabs(v));

                for (int p = 0; p < D; ++p)
                {
                    double w = ds(l, m, n, p);
                    for (int k = 0; k < D; ++k)
                        w -= gb(k, l, m) * s(k, n, p) + gb(k, l, n) * s(m, k, p) + gb(k, l, p) * s(m, n, k);
                    r.r_S = std::max(r.r_S, std::fabs(w));

                    for (int q = 0; q < D; ++q)
                    {
                        double u = G.driem(l, m, n, p, q);
                        for (int k = 0; k < D; ++k)
                            u -= gb(k, l, m) * G.riem(k, n, p, q) + gb(k, l, n) * G.riem(m, k, p, q) +
                                 gb(k, l, p) * G.riem(m, n, k, q) + gb(k, l, q) * G.riem(m, n, p, k);
                        r.r_R = std::max(r.r_R, std::fabs(u));
                    }
                }
            }

    auto xf = frame_xi(sf, D);
    std::vector<double> xi(D, 0.0);
    Nd dxi(D, 2);
    for (int mu = 0; mu < D; ++mu)
        for (int A = 0; A < D; ++A)
        {
            xi[mu] += G.einv(mu, A) * xf[A];
            for (int l = 0; l < D; ++l)
                dxi(l, mu) += G.deinv(l, mu, A) * xf[A];
        }
    for (int r0 = 0; r0 < D; ++r0)
    {
        double acc = 0;
        for (int l = 0; l < D; ++l)
        {
            acc += xi[l] * dxi(l, r0);
            for (int m = 0; m < D; ++m)
                acc += G.gam(r0, l, m) * xi[l] * xi[m];
        }
        r.r_geo = std::max(r.r_geo, std::fabs(acc));
    }
    return r;
}

void merge(ASResiduals &a, const ASResiduals &b)
{
    a.r_g = std::max(a.r_g, b.r_g);
    a.r_R = std::max(a.r_R, b.r_R);
    a.r_S = std::max(a.r_S, b.r_S);
    a.r_geo = std::max(a.r_geo, b.r_geo);
}
} // namespace

// ---------------------------------------------------------------------------

PlaneWaveData::PlaneWaveData(int n_, QMatrix f, QMatrix h) : n(n_), F(std::move(f)), H(std::move(h))
{
    if (n < 1)
        throw InputError("transverse dimension must be at least 1");
    if (F.rows() != n || F.cols() != n || H.rows() != n || H.cols() != n)
        throw InputError("F and H must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!(F + F.transpose()).is_zero())
        throw InputError("F is not antisymmetric");
    if (!(H == H.transpose()))
        throw InputError("H is not symmetric");
}

PlaneWaveData PlaneWaveData::zero(int n) { return PlaneWaveData(n, QMatrix(n, n), QMatrix(n, n)); }

std::vector<double> ChartPoint::coords() const
{
    std::vector<double> c{z, s};
    c.insert(c.end(), x.begin(), x.end());
    return c;
}

ChartPoint ChartPoint::from_coords(const std::vector<double> &c)
{
    if (c.size() < 3)
        throw Error("chart point needs at least three coordinates");
    return ChartPoint{c[0], c[1], std::vector<double>(c.begin() + 2, c.end())};
}

std::vector<DMatrix> profile_derivatives(const PlaneWaveData &pw, double z, int order)
{
    DMatrix f = to_double(pw.F);
    DMatrix h = to_double(pw.H);
    // e^{-zF} H e^{zF}; the opposite rotation sense leaves Dbar R nonzero.
    DMatrix rot = expm((-z) * f);
    std::vector<DMatrix> out{rot * h * rot.transpose()};
    for (int k = 0; k < order; ++k)
        out.push_back(commutator(out.back(), f));
    return out;
}

GeometryJet metric_jet(const PlaneWaveData &pw, const ChartPoint &pt)
{
    auto G = geometry(pw, pt);
    return GeometryJet{to_tensor(G.g, lower(2)), to_tensor(G.dg, lower(3)), to_tensor(G.ddg, lower(4)),
                       to_tensor(G.dddg, lower(5))};
}

Tensor christoffel(const GeometryJet &jet)
{
    Nd g = from_tensor(jet.g), dg = from_tensor(jet.dg);
    int D = g.d;
    DMatrix gm(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
            gm(i, j) = g(i, j);
    DMatrix gi = inverse_or_throw(gm);
    Nd out(D, 3);
    for (int r = 0; r < D; ++r)
        for (int m = 0; m < D; ++m)
            for (int n = 0; n < D; ++n)
            {
                double acc = 0;
                for (int s = 0; s < D; ++s)
                    acc += gi(r, s) * (dg(m, n, s) + dg(n, m, s) - dg(s, m, n));
                out(r, m, n) = 0.5 * acc;
            }
    return to_tensor(out, {Valence::up, Valence::down, Valence::down});
}

Tensor riemann_lower(const PlaneWaveData &pw, const ChartPoint &pt)
{
    return to_tensor(geometry(pw, pt).riem, lower(4));
}

Tensor riemann(const PlaneWaveData &pw, const ChartPoint &pt)
{
    auto G = geometry(pw, pt);
    int D = G.D;
    Nd out(D, 4);
    for (int r = 0; r < D; ++r)
        for (int s = 0; s < D; ++s)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n)
                {
                    double acc = 0;
                    for (int a = 0; a < D; ++a)
                        acc += G.ginv(r, a) * G.riem(a, s, m, n);
                    out(r, s, m, n) = acc;
                }
    return to_tensor(out, {Valence::up, Valence::down, Valence::down, Valence::down});
}

HomogeneousStructure appendix_structure(const PlaneWaveData &pw)
{
    int n = pw.n, D = n + 2;
    Tensor s(D, lower(3), ScalarKind::exact);
    auto &v = s.values<Rational>();
    auto put = [&](int a, int b, int c, const Rational &q) {
        v[(size_t(a) * D + b) * D + c] = q;
        v[(size_t(a) * D + c) * D + b] = -q;
    };
    put(kPlus, kPlus, kMinus, Rational(-1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
        {
            if (i < j)
                put(kPlus, 2 + i, 2 + j, pw.F(i, j));
            Rational delta = i == j ? Rational(1) : Rational(0);
            put(2 + i, kPlus, 2 + j, -delta - pw.F(i, j));
        }
    return HomogeneousStructure(FrameMetric::light_cone(n), s);
}

DMatrix coframe(const PlaneWaveData &pw, const ChartPoint &pt)
{
    auto m = profile_derivatives(pw, pt.z, 0);
    int D = pw.dim();
    DMatrix e = DMatrix::identity(D);
    e(kPlus, kZ) = 1;
    e(kPlus, kS) = 0;
    e(kMinus, kS) = 1;
    e(kMinus, kZ) = quad(m[0], pt.x) + pt.s;
    return e;
}

ChartStructure structure_at(const PlaneWaveData &pw, const ChartPoint &pt)
{
    auto G = geometry(pw, pt);
    Nd s, ds;
    coordinate_structure(G, from_tensor(appendix_structure(pw).s()), s, ds);
    int D = G.D;
    DMatrix gm(D, D), e(D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j)
        {
            gm(i, j) = G.g(i, j);
            e(i, j) = G.e(i, j);
        }
    return ChartStructure{HomogeneousStructure(FrameMetric(gm), to_tensor(s, lower(3))), e};
}

ASResiduals as_residuals_serial(const PlaneWaveData &pw, const std::vector<ChartPoint> &pts,
                                const std::optional<Tensor> &frame_s)
{
    Nd sf = frame_structure_values(pw, frame_s);
    ASResiduals out;
    for (const auto &pt : pts)
        merge(out, point_residuals(pw, pt, sf));
    return out;
}

ASResiduals as_residuals(const PlaneWaveData &pw, const std::vector<ChartPoint> &pts,
                         const std::optional<Tensor> &frame_s)
{
    Nd sf = frame_structure_values(pw, frame_s);
    std::vector<ASResiduals> per(pts.size());
    std::vector<std::string> errors(pts.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(pts.size()); ++i)
    {
        try
        {
            per[i] = point_residuals(pw, pts[i], sf);
        }
        catch (const std::exception &ex)
        {
            errors[i] = ex.what();
        }
    }
    ASResiduals out;
    for (size_t i = 0; i < pts.size(); ++i)
    {
        if (!errors[i].empty())
            throw Error(errors[i]);
        merge(out, per[i]);
    }
    return out;
}

Tensor frame_curvature(const PlaneWaveData &pw, const ChartPoint &pt, const std::optional<Tensor> &frame_s)
{
    auto G = geometry(pw, pt);
    int D = G.D;
    Nd s, ds, gb, dgb;
    coordinate_structure(G, frame_structure_values(pw, frame_s), s, ds);
    connection_bar(G, s, ds, gb, dgb);

    // Rbar^r_{s m n} = d_m Gb^r_{n s} - d_n Gb^r_{m s} + Gb^r_{m l} Gb^l_{n s} - Gb^r_{n l} Gb^l_{m s}
    Nd rc(D, 4);
    for (int r = 0; r < D; ++r)
        for (int s0 = 0; s0 < D; ++s0)
            for (int m = 0; m < D; ++m)
                for (int n = 0; n < D; ++n)
                {
                    double acc = dgb(m, r, n, s0) - dgb(n, r, m, s0);
                    for (int l = 0; l < D; ++l)
                        acc += gb(r, m, l) * gb(l, n, s0) - gb(r, n, l) * gb(l, m, s0);
                    rc(r, s0, m, n) = acc;
                }
    // Frame components Rbar_{AB}^C_D = E_A^m E_B^n e^C_r E_D^s Rbar^r_{s m n}
    Nd out(D, 4);
    for (int A = 0; A < D; ++A)
        for (int B = 0; B < D; ++B)
            for (int C = 0; C < D; ++C)
                for (int Dd = 0; Dd < D; ++Dd)
                {
                    double acc = 0;
                    for (int r = 0; r < D; ++r)
                        for (int s0 = 0; s0 < D; ++s0)
                            for (int m = 0; m < D; ++m)
                                for (int n = 0; n < D; ++n)
                                {
                                    double v = rc(r, s0, m, n);
                                    if (v != 0)
                                        acc += G.einv(m, A) * G.einv(n, B) * G.e(C, r) * G.einv(s0, Dd) * v;
                                }
                    out(A, B, C, Dd) = acc;
                }
    return to_tensor(out, {Valence::down, Valence::down, Valence::up, Valence::down});
}

std::vector<QMatrix> null_boosts(int n)
{
    std::vector<QMatrix> out;
    for (int j = 0; j < n; ++j)
    {
        QMatrix b(n + 2, n + 2);
        b(2 + j, kPlus) = -1;
        b(kMinus, 2 + j) = 1;
        out.push_back(b);
    }
    return out;
}

CurvatureAtPoint curvature_at(const PlaneWaveData &pw, const ChartPoint &pt,
                              const std::optional<Tensor> &frame_s)
{
    Tensor rf = frame_curvature(pw, pt, frame_s);
    const auto &v = rf.values<double>();
    std::vector<Rational> q(v.size());
    for (size_t i = 0; i < v.size(); ++i)
    {
        q[i] = rationalize(v[i]);
        if (std::fabs(q[i].get_d() - v[i]) > 1e-8)
            throw Error("frame curvature component " + format_double(v[i]) +
                        " has no rational reconstruction");
    }
    return CurvatureAtPoint{Tensor::from_values<Rational>(rf.dim(), rf.valence(), std::move(q)),
                            null_boosts(pw.n)};
}

std::vector<std::string> plane_wave_labels(int n)
{
    std::vector<std::string> labels{"U", "V"};
    for (int i = 1; i <= n; ++i)
        labels.push_back("X" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        labels.push_back("Xb" + std::to_string(i));
    return labels;
}

LieAlgebra pw_isometry_algebra(const PlaneWaveData &pw)
{
    int n = pw.n;
    const int U = 0, V = 1;
    auto X = [](int i) { return 2 + i; };
    auto Xb = [n](int i) { return 2 + n + i; };
    BracketTable t(plane_wave_labels(n));
    t.set(U, V, V, Rational(1));
    for (int i = 0; i < n; ++i)
    {
        t.set(U, Xb(i), X(i), Rational(1));
        t.set(X(i), Xb(i), V, Rational(-1));
        for (int j = 0; j < n; ++j)
        {
            if (i < j)
                t.set(X(i), X(j), V, 2 * pw.F(i, j));
            Rational delta = i == j ? Rational(1) : Rational(0);
            t.set(U, X(i), Xb(j), 2 * pw.H(i, j) - pw.F(i, j));
            t.set(U, X(i), X(j), delta + 2 * pw.F(i, j));
        }
    }
    return t.build();
}

std::vector<ChartPoint> sample_points(int n, int count, std::uint64_t seed)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<ChartPoint> pts;
    for (int k = 0; k < count; ++k)
    {
        ChartPoint p;
        p.z = u(rng);
        p.s = u(rng);
        for (int i = 0; i < n; ++i)
            p.x.push_back(u(rng));
        pts.push_back(std::move(p));
    }
    return pts;
}

PlaneWaveData random_plane_wave(int n, std::uint64_t seed)
{
    Rng rng(seed);
    QMatrix f(n, n), h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
        {
            h(i, j) = h(j, i) = random_rational(rng);
            if (i < j)
            {
                f(i, j) = random_rational(rng);
                f(j, i) = -f(i, j);
            }
        }
    return PlaneWaveData(n, f, h);
}

} // namespace homkit

#include "homkit/reduction.hpp"
#include "homkit/random.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace homkit
{

namespace
{
std::vector<Valence> lower(int r) { return std::vector<Valence>(size_t(r), Valence::down); }

Tensor zeros(int n, int rank) { return Tensor(n, lower(rank), ScalarKind::exact); }

Rational &at(Tensor &t, std::initializer_list<int> i) { return t.values<Rational>()[t.offset(i)]; }
const Rational &at(const Tensor &t, std::initializer_list<int> i) { return t.values<Rational>()[t.offset(i)]; }

void bump(Rational &acc, const Rational &v)
{
    Rational a = abs(v);
    if (a > acc)
        acc = a;
}

Rational max_abs_of(const Tensor &t) { return max_abs(t).rational(); }

Rational max_abs_of(const QMatrix &m)
{
    Rational r = 0;
    for (const auto &v : m.data())
        bump(r, v);
    return r;
}

Rational delta(int i, int j) { return i == j ? Rational(1) : Rational(0); }

bool antisymmetric(const Tensor &t, std::initializer_list<int> perm)
{
    return (t + permute_slots(t, perm)).is_zero();
}

void require_shape(const Tensor &t, int n, int rank, const char *name)
{
    if (t.dim() != n || t.rank() != rank || !t.is_exact())
        throw InputError(std::string(name) + " must be an exact rank-" + std::to_string(rank) +
                         " tensor over " + std::to_string(n) + " directions");
}

void require_shape(const QMatrix &m, int n, const char *name)
{
    if (m.rows() != n || m.cols() != n)
        throw InputError(std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

QMatrix embed(const QMatrix &w, int offset, int size)
{
    QMatrix out(size, size);
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            out(offset + i, offset + j) = w(i, j);
    return out;
}

// Jacobi residual grouped by the element types of its three arguments.
struct Blocks
{
    std::vector<NamedResidual> table;
    std::string first_failing;
};

Blocks jacobi_blocks(const LieAlgebra &alg, const std::vector<int> &type, const std::vector<std::string> &names,
                     const std::vector<std::array<int, 3>> &chain)
{
    auto jr = jacobi_residual(alg);
    const auto &j = jr.residual.values<Rational>();
    int d = alg.dim();
    std::map<std::array<int, 3>, Rational> found;
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            for (int c = b + 1; c < d; ++c)
            {
                std::array<int, 3> key{type[a], type[b], type[c]};
                std::sort(key.begin(), key.end());
                Rational &slot = found[key];
                size_t base = ((size_t(a) * d + b) * d + c) * d;
                for (int e = 0; e < d; ++e)
                    bump(slot, j[base + e]);
            }
    std::vector<std::array<int, 3>> order;
    for (const auto &k : chain)
        if (found.count(k))
            order.push_back(k);
    for (const auto &[k, v] : found)
        if (std::find(order.begin(), order.end(), k) == order.end())
            order.push_back(k);
    Blocks out;
    for (const auto &k : order)
    {
        std::string name = "(" + names[k[0]] + "," + names[k[1]] + "," + names[k[2]] + ")";
        out.table.push_back({"Jacobi " + name, found[k]});
        if (out.first_failing.empty() && sgn(found[k]) != 0)
            out.first_failing = name;
    }
    return out;
}

// Null space of a linear map given by its action on coordinate vectors.
template <class Fn> std::vector<std::vector<Rational>> linear_nullspace(int unknowns, Fn &&apply_map)
{
    if (unknowns == 0)
        return {};
    std::vector<std::vector<Rational>> cols;
    for (int u = 0; u < unknowns; ++u)
    {
        std::vector<Rational> e(unknowns, Rational(0));
        e[u] = 1;
        cols.push_back(apply_map(e));
    }
    int rows = int(cols[0].size());
    if (rows == 0)
    {
        std::vector<std::vector<Rational>> all;
        for (int u = 0; u < unknowns; ++u)
        {
            std::vector<Rational> e(unknowns, Rational(0));
            e[u] = 1;
            all.push_back(e);
        }
        return all;
    }
    QMatrix m(rows, unknowns);
    for (int u = 0; u < unknowns; ++u)
        for (int r = 0; r < rows; ++r)
            m(r, u) = cols[u][r];
    return nullspace(m);
}

std::vector<Rational> random_combination(const std::vector<std::vector<Rational>> &basis, int size, Rng &rng)
{
    std::vector<Rational> x(size, Rational(0));
    for (const auto &v : basis)
    {
        Rational c = random_rational(rng);
        for (int i = 0; i < size; ++i)
            x[i] += c * v[i];
    }
    return x;
}

Rational random_nonzero(Rng &rng)
{
    for (;;)
    {
        Rational r = random_rational(rng);
        if (sgn(r) != 0)
            return r;
    }
}

// Generator M_mn of so(eta) acting on the transverse directions.
QMatrix rotation_generator(int n, int m, int k, const QMatrix &eta)
{
    QMatrix g(n, n);
    for (int a = 0; a < n; ++a)
        for (int l = 0; l < n; ++l)
            g(a, l) = delta(a, m) * eta(k, l) - delta(a, k) * eta(m, l);
    return g;
}

const std::vector<std::string> kNondegTypes{"V", "Z", "h"};
const std::vector<std::string> kDegTypes{"U", "V", "Z", "Zbar", "M"};

std::vector<int> nondeg_types(int n, int h)
{
    std::vector<int> t{0};
    t.insert(t.end(), size_t(n), 1);
    t.insert(t.end(), size_t(h), 2);
    return t;
}

struct DegLayout
{
    std::vector<QMatrix> rotations; // n x n basis of the rotation part of h'
    std::vector<int> types;
};

DegLayout deg_layout(const DegenerateAnsatz &a);
} // namespace

// ---------------------------------------------------------------------------
// Ansatz types

NondegenerateAnsatz NondegenerateAnsatz::zero(int n, Rational lambda, int aleph_sign)
{
    NondegenerateAnsatz a;
    a.n = n;
    a.lambda = std::move(lambda);
    a.aleph_sign = aleph_sign;
    a.F = QMatrix(n, n);
    a.C = zeros(n, 3);
    a.R = zeros(n, 3);
    a.Scurv = zeros(n, 4);
    return a;
}

QMatrix NondegenerateAnsatz::eta() const
{
    QMatrix e = QMatrix::identity(n);
    e(0, 0) = -aleph_sign;
    return e;
}

void NondegenerateAnsatz::validate() const
{
    if (n < 1)
        throw InputError("n must be at least 1");
    if (aleph_sign != 1 && aleph_sign != -1)
        throw InputError("aleph_sign must be +1 or -1");
    if (sgn(lambda) == 0)
        throw InputError("lambda must be nonzero");
    if (sgn(lambda) != aleph_sign)
        throw InputError("lambda must carry the sign of aleph_sign");
    require_shape(F, n, "F");
    require_shape(C, n, 3, "C");
    require_shape(R, n, 3, "R");
    require_shape(Scurv, n, 4, "Scurv");
    if (!(F + F.transpose()).is_zero())
        throw InputError("F is not antisymmetric");
    if (!(antisymmetrize(C, {0, 1, 2}) == C))
        throw InputError("C is not totally antisymmetric");
    if (!antisymmetric(R, {0, 2, 1}))
        throw InputError("R is not antisymmetric in its last two indices");
    if (!antisymmetric(Scurv, {1, 0, 2, 3}) || !antisymmetric(Scurv, {0, 1, 3, 2}))
        throw InputError("Scurv is not antisymmetric in both index pairs");
    QMatrix e = eta();
    for (size_t k = 0; k < h_basis.size(); ++k)
    {
        require_shape(h_basis[k], n, "h_basis matrix");
        if (!(h_basis[k].transpose() * e + e * h_basis[k]).is_zero())
            throw InputError("h_basis matrix " + std::to_string(k) + " is not in so(eta)");
    }
}

DegenerateAnsatz DegenerateAnsatz::zero(int n, Rational lambda)
{
    DegenerateAnsatz a;
    a.n = n;
    a.lambda = std::move(lambda);
    a.W.assign(size_t(n), Rational(0));
    a.F = QMatrix(n, n);
    a.aleph = QMatrix(n, n);
    a.C = zeros(n, 3);
    a.h = QMatrix(n, n);
    a.Y = QMatrix(n, n);
    a.R = zeros(n, 3);
    a.S3 = zeros(n, 3);
    a.N = zeros(n, 4);
    a.rvz_boost = QMatrix(n, n);
    a.rvz_rot = zeros(n, 3);
    return a;
}

bool DegenerateAnsatz::occupied(int i) const
{
    return std::find(occupancy.begin(), occupancy.end(), i) != occupancy.end();
}

void DegenerateAnsatz::validate() const
{
    if (n < 1)
        throw InputError("n must be at least 1");
    if (sgn(lambda) == 0)
        throw InputError("lambda must be nonzero");
    if (int(W.size()) != n)
        throw InputError("W must have n entries");
    require_shape(F, n, "F");
    require_shape(aleph, n, "aleph");
    require_shape(h, n, "h");
    require_shape(Y, n, "Y");
    require_shape(rvz_boost, n, "rvz_boost");
    require_shape(C, n, 3, "C");
    require_shape(R, n, 3, "R");
    require_shape(S3, n, 3, "S3");
    require_shape(N, n, 4, "N");
    require_shape(rvz_rot, n, 3, "rvz_rot");
    if (!(F + F.transpose()).is_zero())
        throw InputError("F is not antisymmetric");
    if (!(aleph + aleph.transpose()).is_zero())
        throw InputError("aleph is not antisymmetric");
    if (!(Y + Y.transpose()).is_zero())
        throw InputError("Y is not antisymmetric");
    if (!(antisymmetrize(C, {0, 1, 2}) == C))
        throw InputError("C is not totally antisymmetric");
    if (!antisymmetric(R, {0, 2, 1}) || !antisymmetric(rvz_rot, {0, 2, 1}))
        throw InputError("R and rvz_rot must be antisymmetric in their last two indices");
    if (!antisymmetric(S3, {1, 0, 2}))
        throw InputError("S3 is not antisymmetric in its first two indices");
    if (!antisymmetric(N, {1, 0, 2, 3}) || !antisymmetric(N, {0, 1, 3, 2}))
        throw InputError("N is not antisymmetric in both index pairs");
    std::set<int> seen;
    for (int i : occupancy)
        if (i < 0 || i >= n || !seen.insert(i).second)
            throw InputError("occupancy entries must be distinct directions in 0..n-1");
}

DegenerateAnsatz ansatz_from_plane_wave(const PlaneWaveData &pw)
{
    auto a = DegenerateAnsatz::zero(pw.n, Rational(1));
    for (int i = 0; i < pw.n; ++i)
        a.occupancy.push_back(i);
    a.F = Rational(2) * pw.F;
    a.h = Rational(2) * pw.H - pw.F;
    return a;
}

Tensor f_derivation(const QMatrix &f, const Tensor &c)
{
    int n = c.dim();
    if (f.rows() != n || f.cols() != n || c.rank() != 3)
        throw Error("f_derivation: shape mismatch");
    Tensor out = zeros(n, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
            {
                Rational acc = 0;
                for (int l = 0; l < n; ++l)
                    acc += f(i, l) * at(c, {l, j, k}) + f(j, l) * at(c, {i, l, k}) + f(k, l) * at(c, {i, j, l});
                at(out, {i, j, k}) = acc;
            }
    return out;
}

// ---------------------------------------------------------------------------
// Assembly

LieAlgebra assemble_algebra(const NondegenerateAnsatz &a)
{
    a.validate();
    int n = a.n, m = n + 1;
    QMatrix eta = a.eta();
    const int V = 0;
    auto Z = [](int i) { return 1 + i; };

    ReductiveData data;
    data.m_labels.push_back("V");
    for (int i = 0; i < n; ++i)
        data.m_labels.push_back("Z" + std::to_string(i + 1));
    for (size_t k = 0; k < a.h_basis.size(); ++k)
    {
        data.h_labels.push_back("M" + std::to_string(k + 1));
        data.h_basis.push_back(embed(a.h_basis[k], 1, m));
    }
    data.mm.assign(size_t(m) * m * m, Rational(0));
    data.mm_h.assign(size_t(m) * m, QMatrix());
    auto mm = [&](int x, int y, int z) -> Rational & { return data.mm[(size_t(x) * m + y) * m + z]; };
    auto set_h = [&](int x, int y, const QMatrix &w) {
        QMatrix e = embed(w, 1, m);
        data.mm_h[size_t(x) * m + y] = e;
        data.mm_h[size_t(y) * m + x] = Rational(-1) * e;
    };

    for (int i = 0; i < n; ++i)
    {
        mm(V, Z(i), Z(i)) += a.lambda;
        for (int j = 0; j < n; ++j)
            mm(V, Z(i), Z(j)) += a.F(i, j) * eta(j, j);
        QMatrix rho(n, n);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k)
                rho(r, k) = 2 * eta(r, r) * at(a.R, {i, r, k});
        set_h(V, Z(i), rho);
        for (int c = 0; c < m; ++c)
            mm(Z(i), V, c) = -mm(V, Z(i), c);

        for (int j = i + 1; j < n; ++j)
        {
            mm(Z(i), Z(j), V) = a.aleph_sign * a.F(i, j);
            for (int k = 0; k < n; ++k)
                mm(Z(i), Z(j), Z(k)) = at(a.C, {i, j, k}) * eta(k, k);
            QMatrix sig(n, n);
            for (int r = 0; r < n; ++r)
                for (int k = 0; k < n; ++k)
                    sig(r, k) = 2 * eta(r, r) * at(a.Scurv, {i, j, r, k});
            set_h(Z(i), Z(j), sig);
            for (int c = 0; c < m; ++c)
                mm(Z(j), Z(i), c) = -mm(Z(i), Z(j), c);
        }
    }
    return assemble_reductive(data);
}

namespace
{
DegLayout deg_layout(const DegenerateAnsatz &a)
{
    int n = a.n;
    std::vector<QMatrix> gens;
    auto rot_from = [&](const Tensor &t, int i, const Rational &scale) {
        QMatrix w(n, n);
        for (int r = 0; r < n; ++r)
            for (int l = 0; l < n; ++l)
                w(r, l) = scale * at(t, {i, r, l});
        return w;
    };
    for (int i = 0; i < n; ++i)
    {
        gens.push_back(rot_from(a.R, i, 1));
        gens.push_back(rot_from(a.rvz_rot, i, 1));
        for (int j = i + 1; j < n; ++j)
        {
            QMatrix w(n, n);
            for (int r = 0; r < n; ++r)
                for (int l = 0; l < n; ++l)
                    w(r, l) = 2 * at(a.N, {i, j, r, l});
            gens.push_back(w);
        }
    }
    gens.push_back(Rational(2) * a.Y);
    DegLayout layout;
    layout.rotations = lie_closure(gens);
    for (const auto &w : layout.rotations)
        for (int i = 0; i < n; ++i)
            for (int b : a.occupancy)
                if (!a.occupied(i) && sgn(w(i, b)) != 0)
                    throw InputError("occupancy inconsistent: a rotation moves Zbar" + std::to_string(b + 1) +
                                     " onto the absent Zbar" + std::to_string(i + 1));
    layout.types = {0, 1};
    layout.types.insert(layout.types.end(), size_t(n), 2);
    layout.types.insert(layout.types.end(), a.occupancy.size(), 3);
    layout.types.insert(layout.types.end(), layout.rotations.size(), 4);
    return layout;
}
} // namespace

LieAlgebra assemble_algebra(const DegenerateAnsatz &a)
{
    a.validate();
    int n = a.n, m = n + 2;
    const int U = 0, V = 1;
    auto Z = [](int i) { return 2 + i; };
    DegLayout layout = deg_layout(a);

    auto boost = [&](int j) {
        QMatrix b(m, m);
        b(Z(j), U) = -1;
        b(V, Z(j)) = 1;
        return b;
    };

    ReductiveData data;
    data.m_labels = {"U", "V"};
    for (int i = 0; i < n; ++i)
        data.m_labels.push_back("Z" + std::to_string(i + 1));
    for (int b : a.occupancy)
    {
        data.h_labels.push_back("Zbar" + std::to_string(b + 1));
        data.h_basis.push_back(boost(b));
    }
    for (size_t k = 0; k < layout.rotations.size(); ++k)
    {
        data.h_labels.push_back("M" + std::to_string(k + 1));
        data.h_basis.push_back(embed(layout.rotations[k], 2, m));
    }

    data.mm.assign(size_t(m) * m * m, Rational(0));
    data.mm_h.assign(size_t(m) * m, QMatrix());
    auto mm = [&](int x, int y, int z) -> Rational & { return data.mm[(size_t(x) * m + y) * m + z]; };
    auto finish = [&](int x, int y, const QMatrix &hpart) {
        for (int c = 0; c < m; ++c)
            mm(y, x, c) = -mm(x, y, c);
        data.mm_h[size_t(x) * m + y] = hpart;
        data.mm_h[size_t(y) * m + x] = Rational(-1) * hpart;
    };
    auto boosts = [&](const std::vector<Rational> &coeff, const std::string &where) {
        QMatrix out(m, m);
        for (int j = 0; j < n; ++j)
        {
            if (sgn(coeff[j]) == 0)
                continue;
            if (!a.occupied(j))
                throw InputError(where + " has a Zbar" + std::to_string(j + 1) +
                                 " component but that null boost is not occupied");
            out = out + coeff[j] * boost(j);
        }
        return out;
    };
    auto rotation = [&](const Tensor &t, int i, const Rational &scale) {
        QMatrix w(n, n);
        for (int r = 0; r < n; ++r)
            for (int l = 0; l < n; ++l)
                w(r, l) = scale * at(t, {i, r, l});
        return embed(w, 2, m);
    };
    auto row = [&](const QMatrix &q, int i) {
        std::vector<Rational> v(n);
        for (int j = 0; j < n; ++j)
            v[j] = q(i, j);
        return v;
    };

    // [U,V]
    mm(U, V, V) = a.lambda;
    for (int i = 0; i < n; ++i)
        mm(U, V, Z(i)) = a.W[i];
    {
        QMatrix hp = embed(Rational(2) * a.Y, 2, m);
        for (int b : a.occupancy)
            hp = hp + (-2 * a.lambda * a.W[b]) * boost(b);
        finish(U, V, hp);
    }
    for (int i = 0; i < n; ++i)
    {
        std::string zi = "Z" + std::to_string(i + 1);
        // [U,Z_i]
        mm(U, Z(i), Z(i)) += a.lambda;
        for (int j = 0; j < n; ++j)
            mm(U, Z(i), Z(j)) += a.F(i, j);
        mm(U, Z(i), U) = -a.W[i];
        finish(U, Z(i), boosts(row(a.h, i), "Rbar(U," + zi + ")") + rotation(a.R, i, 1));
        // [V,Z_i]
        mm(V, Z(i), V) = a.W[i];
        for (int j = 0; j < n; ++j)
            mm(V, Z(i), Z(j)) = a.aleph(i, j);
        finish(V, Z(i), boosts(row(a.rvz_boost, i), "Rbar(V," + zi + ")") + rotation(a.rvz_rot, i, 1));
        // [Z_i,Z_j]
        for (int j = i + 1; j < n; ++j)
        {
            mm(Z(i), Z(j), U) = a.aleph(i, j);
            mm(Z(i), Z(j), V) = a.F(i, j);
            std::vector<Rational> sb(n);
            for (int k = 0; k < n; ++k)
            {
                mm(Z(i), Z(j), Z(k)) = at(a.C, {i, j, k});
                sb[k] = at(a.S3, {i, j, k});
            }
            QMatrix w(n, n);
            for (int r = 0; r < n; ++r)
                for (int l = 0; l < n; ++l)
                    w(r, l) = 2 * at(a.N, {i, j, r, l});
            finish(Z(i), Z(j), boosts(sb, "Rbar(" + zi + ",Z" + std::to_string(j + 1) + ")") + embed(w, 2, m));
        }
    }
    return assemble_reductive(data);
}

// ---------------------------------------------------------------------------
// Constraint tables

std::vector<NamedResidual> verify_constraints(const NondegenerateAnsatz &a)
{
    LieAlgebra alg = assemble_algebra(a);
    int n = a.n;
    QMatrix eta = a.eta();
    std::vector<NamedResidual> out;
    out.push_back({"F = 0", max_abs_of(a.F)});

    Rational r2 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                bump(r2, a.lambda / 2 * at(a.C, {i, j, k}) - (at(a.R, {i, j, k}) - at(a.R, {j, i, k})));
    out.push_back({"lambda/2 C_ijk = R_ijk - R_jik", r2});

    Rational r3 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                {
                    Rational rhs = 0;
                    for (int k = 0; k < n; ++k)
                        rhs += at(a.C, {i, j, k}) * eta(k, k) * at(a.R, {k, p, q});
                    bump(r3, 2 * a.lambda * at(a.Scurv, {i, j, p, q}) - rhs);
                }
    out.push_back({"2 lambda S_ij^mn = C_ij^k R_k^mn", r3});

    auto blocks = jacobi_blocks(alg, nondeg_types(n, int(a.h_basis.size())), kNondegTypes, {{{0, 1, 1}}, {{1, 1, 1}}});
    out.insert(out.end(), blocks.table.begin(), blocks.table.end());
    return out;
}

DegenerateAnsatz normalize(const DegenerateAnsatz &a)
{
    const Rational &l = a.lambda;
    DegenerateAnsatz b = a;
    b.lambda = 1;
    b.F = (1 / l) * a.F;
    b.h = Rational(1 / (l * l)) * a.h;
    b.R = Scalar(Rational(1 / l)) * a.R;
    b.S3 = Scalar(Rational(1 / l)) * a.S3;
    b.aleph = l * a.aleph;
    b.rvz_rot = Scalar(l) * a.rvz_rot;
    return b;
}

std::vector<NamedResidual> verify_constraints(const DegenerateAnsatz &a0)
{
    LieAlgebra alg = assemble_algebra(a0);
    DegenerateAnsatz a = normalize(a0);
    int n = a.n;
    std::vector<NamedResidual> out;
    auto F1 = [&](int i, int j) { return a.F(i, j) + delta(i, j); };

    Rational w = 0;
    for (const auto &v : a.W)
        bump(w, v);
    out.push_back({"W = 0", w});
    out.push_back({"aleph = 0", max_abs_of(a.aleph)});
    out.push_back({"Rbar(V,Z) = 0", std::max(max_abs_of(a.rvz_boost), max_abs_of(a.rvz_rot))});
    out.push_back({"Rbar(U,V) = 0", std::max(max_abs_of(a.Y), w)});

    Rational hs = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            bump(hs, (a.h(i, j) - a.h(j, i)) / 2 + a.F(i, j) / 2);
    out.push_back({"h_ij = A_(ij) - F_ij/2", hs});

    Rational ch = 0, uzz3 = 0, uzz4 = 0;
    Tensor dfc = f_derivation(a.F, a.C);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
        {
            for (int l = 0; l < n; ++l)
            {
                Rational lhs = 0, rhs = 0;
                for (int k = 0; k < n; ++k)
                {
                    lhs += at(a.C, {i, j, k}) * a.h(k, l);
                    rhs += F1(i, k) * at(a.S3, {k, j, l}) + F1(j, k) * at(a.S3, {i, k, l});
                }
                bump(ch, lhs - rhs);
                bump(uzz4, at(a.S3, {i, j, l}) + at(a.R, {i, j, l}) - at(a.R, {j, i, l}) - at(dfc, {i, j, l}) -
                               at(a.C, {i, j, l}));
            }
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                {
                    Rational lhs = 0, rhs = 0;
                    for (int k = 0; k < n; ++k)
                    {
                        lhs += at(a.C, {i, j, k}) * at(a.R, {k, p, q}) / 2;
                        rhs += F1(i, k) * at(a.N, {k, j, p, q}) + F1(j, k) * at(a.N, {i, k, p, q});
                    }
                    bump(uzz3, lhs - rhs);
                }
        }
    out.push_back({"C_ijk h_kl = (F+1)_ik S_kjl + (F+1)_jk S_ikl", ch});
    out.push_back({"C_ijk R_kmn/2 = (F+1)_ik N_kjmn + (F+1)_jk N_ikmn", uzz3});
    out.push_back({"S_ijk + R_ijk - R_jik = dF C_ijk + C_ijk", uzz4});

    Rational s3 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                bump(s3, 3 * at(a.S3, {i, j, k}) - at(dfc, {i, j, k}));
    out.push_back({"3 S = dF C", s3});

    Rational z1 = 0, z2 = 0, z3 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
            {
                const int cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
                for (int p = 0; p < n; ++p)
                {
                    Rational s1 = 0, s3c = 0;
                    for (const auto &c : cyc)
                    {
                        for (int l = 0; l < n; ++l)
                        {
                            s1 += at(a.C, {c[1], c[2], l}) * at(a.S3, {c[0], l, p});
                            s3c += at(a.C, {c[1], c[2], l}) * at(a.C, {c[0], l, p});
                        }
                        s3c += 2 * at(a.N, {c[1], c[2], c[0], p});
                    }
                    bump(z1, s1);
                    bump(z3, s3c);
                    for (int q = 0; q < n; ++q)
                    {
                        Rational s2 = 0;
                        for (const auto &c : cyc)
                            for (int l = 0; l < n; ++l)
                                s2 += at(a.C, {c[1], c[2], l}) * at(a.N, {c[0], l, p, q});
                        bump(z2, s2);
                    }
                }
            }
    out.push_back({"cyclic C_jkl S_ilm = 0", z1});
    out.push_back({"cyclic C_jkl N_ilmn = 0", z2});
    out.push_back({"cyclic (C_jkl C_ilm + 2 N_jkim) = 0", z3});

    Rational c0 = 0, sr = 0, n0 = 0, fc = 0;
    for (int x : a.occupancy)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                bump(c0, at(a.C, {i, x, j}));
                bump(sr, at(a.S3, {i, x, j}) - at(a.R, {i, x, j}));
                for (int k = 0; k < n; ++k)
                    bump(n0, at(a.N, {i, x, j, k}));
                if (a.occupied(i) || a.occupied(j))
                    continue;
                for (int k = 0; k < n; ++k)
                {
                    if (a.occupied(k))
                        continue;
                    Rational s = 0;
                    for (int I = 0; I < n; ++I)
                        if (!a.occupied(I))
                            s += a.F(x, I) * at(a.C, {I, j, k});
                    bump(fc, s);
                }
            }
    out.push_back({"C_iaj = 0", c0});
    out.push_back({"S_iaj = R_iaj", sr});
    out.push_back({"N_iakl = 0", n0});
    out.push_back({"F_aI C_IJK = 0", fc});

    auto layout = deg_layout(a0);
    auto blocks = jacobi_blocks(alg, layout.types, kDegTypes,
                                {{{0, 1, 2}}, {{0, 2, 3}}, {{2, 2, 3}}, {{1, 2, 2}}, {{0, 2, 2}}, {{2, 2, 2}}});
    out.insert(out.end(), blocks.table.begin(), blocks.table.end());
    return out;
}

std::string to_string(Verdict v)
{
    switch (v)
    {
    case Verdict::symmetric_space:
        return "symmetric_space";
    case Verdict::plane_wave:
        return "plane_wave";
    case Verdict::inconsistent:
        return "inconsistent";
    }
    return "inconsistent";
}

// ---------------------------------------------------------------------------
// Reductions

namespace
{
std::string first_jacobi_failure(const std::vector<NamedResidual> &table)
{
    const std::string prefix = "Jacobi ";
    for (const auto &r : table)
        if (r.name.rfind(prefix, 0) == 0 && sgn(r.value) != 0)
            return r.name.substr(prefix.size());
    return {};
}

void require_zero(ReductionReport &rep, const std::string &name, const Rational &value)
{
    rep.residuals.push_back({name, value});
    if (sgn(value) != 0)
        throw Error("reduction check failed: " + name + " (residual " + format_rational(value) + ")");
}
} // namespace

ReductionReport nondegenerate_reduce(const NondegenerateAnsatz &a)
{
    ReductionReport rep;
    rep.lambda = a.lambda;
    LieAlgebra alg = assemble_algebra(a);
    rep.residuals = verify_constraints(a);
    rep.failing = first_jacobi_failure(rep.residuals);
    if (!rep.failing.empty())
    {
        rep.verdict = Verdict::inconsistent;
        rep.algebra = alg;
        return rep;
    }
    int n = a.n, d = alg.dim(), m = n + 1;
    require_zero(rep, "forced F = 0", max_abs_of(a.F));

    // Y_i = Z_i + lambda^{-1} Rbar(V,Z_i)
    QMatrix p = QMatrix::identity(d);
    auto labels = alg.labels();
    for (int i = 0; i < n; ++i)
    {
        labels[1 + i] = "Y" + std::to_string(i + 1);
        for (int b = m; b < d; ++b)
            p(1 + i, b) = alg.coeff(0, 1 + i, b) / a.lambda;
    }
    LieAlgebra red = change_basis(alg, p, labels);
    rep.redefinitions.push_back({"Y_i = Z_i + Rbar(V,Z_i)/lambda", labels, p});

    Rational vy = 0, yv = 0, yy = 0, yh = 0;
    for (int i = 0; i < n; ++i)
    {
        for (int c = 0; c < d; ++c)
            bump(vy, red.coeff(0, 1 + i, c) - (c == 1 + i ? a.lambda : Rational(0)));
        for (int j = 0; j < n; ++j)
        {
            bump(yv, red.coeff(1 + i, 1 + j, 0));
            for (int k = 0; k < n; ++k)
                bump(yy, red.coeff(1 + i, 1 + j, 1 + k));
            for (int b = m; b < d; ++b)
                bump(yh, red.coeff(1 + i, 1 + j, b));
        }
    }
    require_zero(rep, "[V,Y_i] = lambda Y_i", vy);
    require_zero(rep, "[Y_i,Y_j] in h'", std::max(yv, yy));
    require_zero(rep, "C = 0 after redefinition", yy);
    require_zero(rep, "S = 0 after redefinition", yh);
    rep.verdict = Verdict::symmetric_space;
    rep.algebra = red;
    return rep;
}

ReductionReport degenerate_reduce(const DegenerateAnsatz &a)
{
    ReductionReport rep;
    rep.lambda = a.lambda;
    LieAlgebra alg = assemble_algebra(a);
    rep.residuals = verify_constraints(a);
    rep.failing = first_jacobi_failure(rep.residuals);
    if (!rep.failing.empty())
    {
        rep.verdict = Verdict::inconsistent;
        rep.algebra = alg;
        return rep;
    }

    int n = a.n, d = alg.dim();
    int nb = int(a.occupancy.size());
    const int U = 0, V = 1;
    auto Z = [](int i) { return 2 + i; };
    auto Zb = [&](int pos) { return 2 + n + pos; };
    int rot0 = 2 + n + nb;

    // lambda = 1 via U' = U/lambda, V' = lambda V, Zbar' = lambda Zbar
    DegenerateAnsatz a1 = normalize(a);
    LieAlgebra alg1 = assemble_algebra(a1);
    {
        QMatrix p = QMatrix::identity(d);
        p(U, U) = 1 / a.lambda;
        p(V, V) = a.lambda;
        for (int k = 0; k < nb; ++k)
            p(Zb(k), Zb(k)) = a.lambda;
        rep.redefinitions.push_back({"U' = U/lambda, V' = lambda V, Zbar' = lambda Zbar", alg1.labels(), p});
    }

    Rational w = 0;
    for (const auto &v : a1.W)
        bump(w, v);
    require_zero(rep, "forced W = 0", w);
    require_zero(rep, "forced aleph = 0", max_abs_of(a1.aleph));
    require_zero(rep, "forced Rbar(V,Z) = 0", std::max(max_abs_of(a1.rvz_boost), max_abs_of(a1.rvz_rot)));
    require_zero(rep, "forced Rbar(U,V) = 0", max_abs_of(a1.Y));

    // Y_I = Z_I - F_Ia Zbar_a
    auto labels = alg1.labels();
    QMatrix py = QMatrix::identity(d);
    for (int i = 0; i < n; ++i)
    {
        if (a1.occupied(i))
            continue;
        labels[Z(i)] = "Y" + std::to_string(i + 1);
        for (int k = 0; k < nb; ++k)
            py(Z(i), Zb(k)) = -a1.F(i, a1.occupancy[k]);
    }
    LieAlgebra alg2 = change_basis(alg1, py, labels);
    rep.redefinitions.push_back({"Y_I = Z_I - F_Ia Zbar_a", labels, py});

    // W_I = Y_I + rotation part of [U,Y_I]
    QMatrix pw = QMatrix::identity(d);
    for (int i = 0; i < n; ++i)
    {
        if (a1.occupied(i))
            continue;
        labels[Z(i)] = "W" + std::to_string(i + 1);
        for (int b = rot0; b < d; ++b)
            pw(Z(i), b) = alg2.coeff(U, Z(i), b);
    }
    LieAlgebra alg3 = change_basis(alg2, pw, labels);
    rep.redefinitions.push_back({"W_I = Y_I + R_IJK M_JK / 2", labels, pw});

    Rational uw = 0, ww = 0, zw = 0;
    for (int i = 0; i < n; ++i)
    {
        if (a1.occupied(i))
            continue;
        for (int c = 0; c < d; ++c)
            bump(uw, alg3.coeff(U, Z(i), c) - delta(c, Z(i)));
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < d; ++c)
            {
                if (a1.occupied(j))
                    bump(zw, alg3.coeff(Z(j), Z(i), c));
                else
                    bump(ww, alg3.coeff(Z(j), Z(i), c));
            }
    }
    require_zero(rep, "[U,W_I] = W_I", uw);
    require_zero(rep, "[W_I,W_J] = 0", ww);
    require_zero(rep, "[Z_a,W_I] = 0", zw);

    // The occupied sector carries the plane wave; couplings F_aI survive in [U,Z_a].
    QMatrix fpw(n, n), hpw(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
        {
            fpw(x, y) = a1.F(x, y) / 2;
            hpw(x, y) = (a1.h(x, y) + a1.h(y, x)) / 4;
        }
    PlaneWaveData out(n, fpw, hpw);
    LieAlgebra full = pw_isometry_algebra(out);
    QMatrix pt = QMatrix::identity(full.dim());
    for (int i = 0; i < n; ++i)
        if (!a1.occupied(i))
            for (int x : a1.occupancy)
                pt(2 + i, 2 + n + x) = -a1.F(i, x);
    LieAlgebra tmpl = change_basis(full, pt, full.labels());

    // Compare on U, V, X_i <-> Z_a / W_I, Xbar_a <-> Zbar_a.
    std::vector<int> to_tmpl(d, -1);
    to_tmpl[U] = 0;
    to_tmpl[V] = 1;
    for (int i = 0; i < n; ++i)
        to_tmpl[Z(i)] = 2 + i;
    for (int k = 0; k < nb; ++k)
        to_tmpl[Zb(k)] = 2 + n + a1.occupancy[k];
    std::vector<bool> hit(tmpl.dim(), false);
    for (int x = 0; x < d; ++x)
        if (to_tmpl[x] >= 0)
            hit[to_tmpl[x]] = true;
    Rational diff = 0;
    for (int x = 0; x < d; ++x)
        for (int y = x + 1; y < d; ++y)
        {
            if (to_tmpl[x] < 0 || to_tmpl[y] < 0)
                continue;
            for (int c = 0; c < d; ++c)
            {
                Rational expect = to_tmpl[c] >= 0 ? tmpl.coeff(to_tmpl[x], to_tmpl[y], to_tmpl[c]) : Rational(0);
                bump(diff, alg3.coeff(x, y, c) - expect);
            }
            for (int t = 0; t < tmpl.dim(); ++t)
                if (!hit[t])
                    bump(diff, tmpl.coeff(to_tmpl[x], to_tmpl[y], t));
        }
    require_zero(rep, "plane-wave bracket template", diff);
    require_zero(rep, "Jacobi of the rebuilt plane-wave algebra", jacobi_residual(full).max_abs.rational());

    rep.verdict = Verdict::plane_wave;
    rep.algebra = alg3;
    rep.plane_wave = out;
    return rep;
}

// ---------------------------------------------------------------------------
// Instance generators

NondegenerateAnsatz generate_nondegenerate(int n, std::uint64_t seed, const GenerateOptions &opt)
{
    if (n < 1 || n > 4)
        throw InputError("generator supports 1 <= n <= 4");
    Rng rng(seed);
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt)
    {
        int aleph = std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1;
        Rational lambda = abs(random_nonzero(rng)) * aleph;
        auto a = NondegenerateAnsatz::zero(n, lambda, aleph);
        QMatrix eta = a.eta();

        std::vector<QMatrix> full;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                full.push_back(rotation_generator(n, p, q, eta));
        int choice = opt.isotropy ? *opt.isotropy : std::uniform_int_distribution<int>(0, 2)(rng);
        std::vector<QMatrix> hb;
        if (choice == 1)
            hb = full;
        else if (choice == 2 && !full.empty())
        {
            QMatrix w(n, n);
            for (const auto &g : full)
                w = w + random_rational(rng) * g;
            if (!w.is_zero())
                hb.push_back(w);
        }
        int k = int(hb.size());

        // rho_i = sum_b c_ib hb_b with R_irk = eta_rr rho_i(r,k) / 2
        auto build_rho = [&](const std::vector<Rational> &c) {
            std::vector<QMatrix> rho(n, QMatrix(n, n));
            for (int i = 0; i < n; ++i)
                for (int b = 0; b < k; ++b)
                    rho[i] = rho[i] + c[size_t(i) * k + b] * hb[b];
            return rho;
        };
        auto build_r = [&](const std::vector<QMatrix> &rho) {
            Tensor r = zeros(n, 3);
            for (int i = 0; i < n; ++i)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        at(r, {i, p, q}) = eta(p, p) * rho[i](p, q) / 2;
            return r;
        };
        auto constraints = [&](const std::vector<Rational> &c) {
            auto rho = build_rho(c);
            Tensor r = build_r(rho);
            std::vector<Rational> out;
            for (const auto &g : hb)
                for (int i = 0; i < n; ++i)
                {
                    QMatrix e = commutator(g, rho[i]);
                    for (int j = 0; j < n; ++j)
                        e = e - g(j, i) * rho[j];
                    out.insert(out.end(), e.data().begin(), e.data().end());
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l)
                        out.push_back(at(r, {i, j, l}) - at(r, {j, i, l}) + at(r, {i, l, j}) - at(r, {l, i, j}));
            return out;
        };
        auto ns = linear_nullspace(n * k, constraints);
        auto c = random_combination(ns, n * k, rng);
        a.R = build_r(build_rho(c));
        a.h_basis = hb;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    at(a.C, {i, j, l}) = 2 * (at(a.R, {i, j, l}) - at(a.R, {j, i, l})) / lambda;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                    {
                        Rational acc = 0;
                        for (int l = 0; l < n; ++l)
                            acc += at(a.C, {i, j, l}) * eta(l, l) * at(a.R, {l, p, q});
                        at(a.Scurv, {i, j, p, q}) = acc / (2 * lambda);
                    }
        if (jacobi_residual(assemble_algebra(a)).vanishes())
            return a;
    }
    throw Error("no consistent non-degenerate instance found within the attempt budget");
}

DegenerateAnsatz generate_degenerate(int n, std::uint64_t seed, const GenerateOptions &opt)
{
    if (n < 1 || n > 4)
        throw InputError("generator supports 1 <= n <= 4");
    Rng rng(seed);
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt)
    {
        auto a = DegenerateAnsatz::zero(n, Rational(1));
        if (opt.occupancy)
            a.occupancy = *opt.occupancy;
        else
            for (int i = 0; i < n; ++i)
                if (std::uniform_int_distribution<int>(0, 1)(rng))
                    a.occupancy.push_back(i);
        std::vector<int> occ = a.occupancy, rest;
        for (int i = 0; i < n; ++i)
            if (!a.occupied(i))
                rest.push_back(i);
        int ni = int(rest.size());

        std::vector<QMatrix> full;
        for (int p = 0; p < ni; ++p)
            for (int q = p + 1; q < ni; ++q)
                full.push_back(rotation_generator(n, rest[p], rest[q], QMatrix::identity(n)));
        int choice = opt.isotropy ? *opt.isotropy : std::uniform_int_distribution<int>(0, 2)(rng);
        std::vector<QMatrix> kb;
        if (choice == 1)
            kb = full;
        else if (choice == 2 && !full.empty())
        {
            QMatrix w(n, n);
            for (const auto &g : full)
                w = w + random_rational(rng) * g;
            if (!w.is_zero())
                kb.push_back(w);
        }
        int k = int(kb.size());

        auto build_rho = [&](const std::vector<Rational> &c) {
            std::vector<QMatrix> rho(n, QMatrix(n, n));
            for (int p = 0; p < ni; ++p)
                for (int b = 0; b < k; ++b)
                    rho[rest[p]] = rho[rest[p]] + c[size_t(p) * k + b] * kb[b];
            return rho;
        };
        auto build_r = [&](const std::vector<QMatrix> &rho) {
            Tensor r = zeros(n, 3);
            for (int i = 0; i < n; ++i)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        at(r, {i, p, q}) = rho[i](p, q);
            return r;
        };
        auto constraints = [&](const std::vector<Rational> &c) {
            auto rho = build_rho(c);
            Tensor r = build_r(rho);
            std::vector<Rational> out;
            for (const auto &g : kb)
                for (int i : rest)
                {
                    QMatrix e = commutator(g, rho[i]);
                    for (int j : rest)
                        e = e - g(j, i) * rho[j];
                    out.insert(out.end(), e.data().begin(), e.data().end());
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l)
                        out.push_back(at(r, {i, j, l}) - at(r, {j, i, l}) + at(r, {i, l, j}) - at(r, {l, i, j}));
            return out;
        };
        auto ns = linear_nullspace(ni * k, constraints);
        a.R = build_r(build_rho(random_combination(ns, ni * k, rng)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    at(a.C, {i, j, l}) = at(a.R, {i, j, l}) - at(a.R, {j, i, l});
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                    {
                        Rational acc = 0;
                        for (int l = 0; l < n; ++l)
                            acc += at(a.C, {i, j, l}) * at(a.R, {l, p, q});
                        at(a.N, {i, j, p, q}) = acc / 4;
                    }

        // F_aI: orthogonal to C_IJK and annihilated by the rotations.
        for (int x : occ)
        {
            auto fc = [&](const std::vector<Rational> &f) {
                std::vector<Rational> out;
                for (int j : rest)
                    for (int l : rest)
                    {
                        Rational s = 0;
                        for (int p = 0; p < ni; ++p)
                            s += f[p] * at(a.C, {rest[p], j, l});
                        out.push_back(s);
                    }
                for (const auto &g : kb)
                    for (int j : rest)
                    {
                        Rational s = 0;
                        for (int p = 0; p < ni; ++p)
                            s += g(j, rest[p]) * f[p];
                        out.push_back(s);
                    }
                return out;
            };
            auto f = random_combination(linear_nullspace(ni, fc), ni, rng);
            for (int p = 0; p < ni; ++p)
            {
                a.F(x, rest[p]) = f[p];
                a.F(rest[p], x) = -f[p];
                a.h(rest[p], x) = f[p];
            }
        }
        for (size_t p = 0; p < occ.size(); ++p)
            for (size_t q = p; q < occ.size(); ++q)
            {
                int x = occ[p], y = occ[q];
                Rational sym = random_rational(rng);
                if (p == q)
                {
                    a.h(x, x) = sym;
                    continue;
                }
                Rational f = random_rational(rng);
                a.F(x, y) = f;
                a.F(y, x) = -f;
                a.h(x, y) = sym - f / 2;
                a.h(y, x) = sym + f / 2;
            }
        if (!jacobi_residual(assemble_algebra(a)).vanishes())
            continue;

        Rational l = random_nonzero(rng);
        DegenerateAnsatz out = a;
        out.lambda = l;
        out.F = l * a.F;
        out.h = (l * l) * a.h;
        out.R = Scalar(l) * a.R;
        if (jacobi_residual(assemble_algebra(out)).vanishes())
            return out;
    }
    throw Error("no consistent degenerate instance found within the attempt budget");
}

} // namespace homkit

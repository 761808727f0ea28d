#include "homkit/lie_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace homkit
{

namespace
{
const std::vector<Valence> kStructureValence{Valence::down, Valence::down, Valence::up};

template <class T> void check_antisymmetric(const Tensor &f)
{
    const auto &v = f.values<T>();
    int n = f.dim();
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int c = 0; c < n; ++c)
            {
                const T &x = v[(size_t(a) * n + b) * n + c];
                const T &y = v[(size_t(b) * n + a) * n + c];
                if (x != -y)
                    throw InputError("structure constants are not antisymmetric in (a,b)");
            }
}

size_t at3(int n, int a, int b, int c) { return (size_t(a) * n + b) * n + c; }
} // namespace

LieAlgebra::LieAlgebra(std::vector<std::string> labels, Tensor structure)
    : labels_(std::move(labels)), f_(std::move(structure))
{
    if (f_.rank() != 3 || f_.valence() != kStructureValence)
        throw InputError("structure tensor must have valence (d,d,u)");
    if (f_.dim() != int(labels_.size()))
        throw InputError("label count does not match algebra dimension");
    if (f_.is_exact())
        check_antisymmetric<Rational>(f_);
    else
        check_antisymmetric<double>(f_);
}

std::vector<std::string> LieAlgebra::default_labels(int n)
{
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i)
        labels.push_back("e" + std::to_string(i));
    return labels;
}

LieAlgebra LieAlgebra::abelian(int n)
{
    return LieAlgebra(default_labels(n), Tensor(n, kStructureValence, ScalarKind::exact));
}

const Rational &LieAlgebra::coeff(int a, int b, int c) const
{
    return f_.values<Rational>()[at3(dim(), a, b, c)];
}

int LieAlgebra::index_of(const std::string &label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw Error("no basis element labelled '" + label + "'");
    return int(it - labels_.begin());
}

BracketTable::BracketTable(std::vector<std::string> labels)
    : labels_(std::move(labels)), f_(labels_.size() * labels_.size() * labels_.size(), Rational(0))
{
}

void BracketTable::add(int a, int b, int c, const Rational &value)
{
    int n = dim();
    if (a == b)
    {
        if (sgn(value) != 0)
            throw Error("[x, x] must vanish");
        return;
    }
    f_[at3(n, a, b, c)] += value;
    f_[at3(n, b, a, c)] -= value;
}

void BracketTable::set(int a, int b, int c, const Rational &value)
{
    int n = dim();
    if (a == b)
    {
        if (sgn(value) != 0)
            throw Error("[x, x] must vanish");
        return;
    }
    f_[at3(n, a, b, c)] = value;
    f_[at3(n, b, a, c)] = -value;
}

LieAlgebra BracketTable::build() const
{
    int n = dim();
    return LieAlgebra(labels_, Tensor::from_values<Rational>(n, kStructureValence, f_));
}

// ---------------------------------------------------------------------------
// Jacobi residual

namespace
{
template <class T> struct Sparse
{
    // nonzero f_xy^e per ordered pair (x, y)
    std::vector<std::vector<std::pair<int, const T *>>> pairs;
    int n;

    explicit Sparse(const Tensor &f) : n(f.dim())
    {
        const auto &v = f.values<T>();
        pairs.resize(size_t(n) * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int e = 0; e < n; ++e)
                {
                    const T &c = v[at3(n, x, y, e)];
                    if (!homkit::is_zero(c))
                        pairs[size_t(x) * n + y].emplace_back(e, &c);
                }
    }
    const auto &nz(int x, int y) const { return pairs[size_t(x) * n + y]; }
};

// Accumulates the a-th block J_{a..}^{.} into out.
template <class T> void jacobi_block(const Sparse<T> &sp, int a, std::vector<T> &out)
{
    int n = sp.n;
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
        {
            size_t base = at3(n, a, b, c) * n;
            // [[a,b],c] + [[b,c],a] + [[c,a],b]
            const int cyc[3][3] = {{a, b, c}, {b, c, a}, {c, a, b}};
            for (const auto &t : cyc)
                for (const auto &[e, fe] : sp.nz(t[0], t[1]))
                    for (const auto &[d, fd] : sp.nz(e, t[2]))
                        out[base + d] += (*fe) * (*fd);
        }
}

template <class T> JacobiResult finish(int n, std::vector<T> values)
{
    Tensor res = Tensor::from_values<T>(
        n, {Valence::down, Valence::down, Valence::down, Valence::up}, std::move(values));
    Scalar mx = max_abs(res);
    return JacobiResult{std::move(res), mx};
}

template <class T> JacobiResult jacobi_serial_t(const LieAlgebra &alg)
{
    int n = alg.dim();
    Sparse<T> sp(alg.structure());
    std::vector<T> out(size_t(n) * n * n * n, T(0));
    for (int a = 0; a < n; ++a)
        jacobi_block(sp, a, out);
    return finish<T>(n, std::move(out));
}

template <class T> JacobiResult jacobi_parallel_t(const LieAlgebra &alg)
{
    int n = alg.dim();
    Sparse<T> sp(alg.structure());
    std::vector<T> out(size_t(n) * n * n * n, T(0));
    // Each a writes a disjoint block of out.
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < n; ++a)
        jacobi_block(sp, a, out);
    return finish<T>(n, std::move(out));
}
} // namespace

JacobiResult jacobi_residual(const LieAlgebra &algebra)
{
    if (algebra.kind() == ScalarKind::exact)
        return jacobi_parallel_t<Rational>(algebra);
    return jacobi_parallel_t<double>(algebra);
}

JacobiResult jacobi_residual_serial(const LieAlgebra &algebra)
{
    if (algebra.kind() == ScalarKind::exact)
        return jacobi_serial_t<Rational>(algebra);
    return jacobi_serial_t<double>(algebra);
}

// ---------------------------------------------------------------------------
// Basis changes

LieAlgebra change_basis(const LieAlgebra &algebra, const QMatrix &p, std::vector<std::string> labels)
{
    int n = algebra.dim();
    if (p.rows() != n || p.cols() != n)
        throw Error("change_basis: matrix shape mismatch");
    if (!algebra.structure().is_exact())
        throw TagMismatch();
    auto pinv = inverse(p);
    if (!pinv)
        throw Error("change_basis: singular basis-change matrix");
    if (labels.empty())
        labels = algebra.labels();
    if (int(labels.size()) != n)
        throw Error("change_basis: label count mismatch");

    const auto &f = algebra.structure().values<Rational>();
    // g_xy^c = f_xy^z Pinv(z,c)
    std::vector<Rational> g(size_t(n) * n * n, Rational(0));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
            {
                const Rational &v = f[at3(n, x, y, z)];
                if (sgn(v) == 0)
                    continue;
                for (int c = 0; c < n; ++c)
                    if (sgn((*pinv)(z, c)) != 0)
                        g[at3(n, x, y, c)] += v * (*pinv)(z, c);
            }
    // h_ay^c = P(a,x) g_xy^c
    std::vector<Rational> h(size_t(n) * n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int x = 0; x < n; ++x)
        {
            if (sgn(p(a, x)) == 0)
                continue;
            for (int y = 0; y < n; ++y)
                for (int c = 0; c < n; ++c)
                    if (sgn(g[at3(n, x, y, c)]) != 0)
                        h[at3(n, a, y, c)] += p(a, x) * g[at3(n, x, y, c)];
        }
    std::vector<Rational> out(size_t(n) * n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int y = 0; y < n; ++y)
            {
                if (sgn(p(b, y)) == 0)
                    continue;
                for (int c = 0; c < n; ++c)
                    if (sgn(h[at3(n, a, y, c)]) != 0)
                        out[at3(n, a, b, c)] += p(b, y) * h[at3(n, a, y, c)];
            }
    return LieAlgebra(std::move(labels),
                      Tensor::from_values<Rational>(n, kStructureValence, std::move(out)));
}

// ---------------------------------------------------------------------------
// Reductive splits

ReductiveReport check_reductive(const LieAlgebra &algebra, const ReductiveSplit &split)
{
    int n = algebra.dim();
    if (!algebra.structure().is_exact())
        throw TagMismatch();
    std::vector<int> owner(n, -1);
    for (int i : split.m)
    {
        if (i < 0 || i >= n)
            throw InputError("split index out of range");
        if (owner[i] != -1)
            throw InputError("index " + std::to_string(i) + " appears twice in the split");
        owner[i] = 0;
    }
    for (int i : split.h)
    {
        if (i < 0 || i >= n)
            throw InputError("split index out of range");
        if (owner[i] != -1)
            throw InputError("index " + std::to_string(i) + " appears in both m and h");
        owner[i] = 1;
    }
    for (int i = 0; i < n; ++i)
        if (owner[i] == -1)
            throw InputError("index " + std::to_string(i) + " is in neither m nor h");

    ReductiveReport report;
    const auto &labels = algebra.labels();
    auto complain = [&](int a, int b, int c) {
        std::ostringstream os;
        os << "[" << labels[a] << "," << labels[b] << "] has component "
           << format_rational(algebra.coeff(a, b, c)) << " along " << labels[c];
        report.violations.push_back(os.str());
        report.reductive = false;
    };
    for (int a : split.h)
    {
        for (int b : split.h)
            if (a < b)
                for (int c : split.m)
                    if (sgn(algebra.coeff(a, b, c)) != 0)
                        complain(a, b, c);
        for (int b : split.m)
            for (int c : split.h)
                if (sgn(algebra.coeff(a, b, c)) != 0)
                    complain(a, b, c);
    }

    // h' = span of h-components of [m, m]
    std::vector<std::vector<Rational>> rows;
    for (size_t i = 0; i < split.m.size(); ++i)
        for (size_t j = i + 1; j < split.m.size(); ++j)
        {
            std::vector<Rational> v(n, Rational(0));
            bool any = false;
            for (int c : split.h)
            {
                v[c] = algebra.coeff(split.m[i], split.m[j], c);
                any = any || sgn(v[c]) != 0;
            }
            if (any)
                rows.push_back(std::move(v));
        }
    if (!rows.empty())
    {
        QMatrix m(int(rows.size()), n);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < n; ++c)
                m(r, c) = rows[r][c];
        auto ech = rref(m);
        for (size_t r = 0; r < ech.pivots.size(); ++r)
        {
            std::vector<Rational> v(n);
            for (int c = 0; c < n; ++c)
                v[c] = ech.reduced(int(r), c);
            report.h_prime.push_back(std::move(v));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Algebras from isotropy data

std::optional<std::vector<Rational>> span_coordinates(const std::vector<QMatrix> &basis,
                                                      const QMatrix &m)
{
    if (basis.empty())
    {
        if (m.is_zero())
            return std::vector<Rational>{};
        return std::nullopt;
    }
    int len = m.rows() * m.cols();
    QMatrix a(len, int(basis.size()));
    for (size_t k = 0; k < basis.size(); ++k)
        for (int i = 0; i < len; ++i)
            a(i, int(k)) = basis[k].data()[i];
    return solve(a, m.data());
}

std::vector<QMatrix> lie_closure(const std::vector<QMatrix> &generators)
{
    std::vector<QMatrix> basis;
    auto try_add = [&](const QMatrix &m) {
        if (m.is_zero() || span_coordinates(basis, m))
            return false;
        basis.push_back(m);
        return true;
    };
    for (const auto &g : generators)
        try_add(g);
    bool grew = true;
    while (grew)
    {
        grew = false;
        size_t count = basis.size();
        for (size_t i = 0; i < count; ++i)
            for (size_t j = i + 1; j < count; ++j)
                grew = try_add(commutator(basis[i], basis[j])) || grew;
    }
    return basis;
}

LieAlgebra assemble_reductive(const ReductiveData &data)
{
    int m = int(data.m_labels.size());
    int k = int(data.h_basis.size());
    int n = m + k;
    if (int(data.mm.size()) != m * m * m)
        throw Error("assemble_reductive: m-bracket table has wrong size");
    if (!data.mm_h.empty() && int(data.mm_h.size()) != m * m)
        throw Error("assemble_reductive: h-part table has wrong size");
    if (int(data.h_labels.size()) != k)
        throw Error("assemble_reductive: h label count mismatch");
    for (const auto &a : data.h_basis)
        if (a.rows() != m || a.cols() != m)
            throw Error("assemble_reductive: isotropy matrix has wrong shape");

    std::vector<std::string> labels = data.m_labels;
    labels.insert(labels.end(), data.h_labels.begin(), data.h_labels.end());
    BracketTable table(labels);

    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
        {
            for (int c = 0; c < m; ++c)
                table.set(a, b, c, data.mm[(size_t(a) * m + b) * m + c]);
            if (data.mm_h.empty())
                continue;
            const QMatrix &hp = data.mm_h[size_t(a) * m + b];
            const QMatrix &hq = data.mm_h[size_t(b) * m + a];
            if (hp.rows() == 0 && hq.rows() == 0)
                continue;
            if (hp.rows() != 0 && hq.rows() != 0 && !(hp + hq).is_zero())
                throw Error("h-part of [" + labels[a] + "," + labels[b] + "] is not antisymmetric");
            if (hp.rows() == 0)
                continue;
            auto coords = span_coordinates(data.h_basis, hp);
            if (!coords)
                throw Error("h-part of [" + labels[a] + "," + labels[b] +
                            "] lies outside span(h_basis)");
            for (int j = 0; j < k; ++j)
                table.set(a, b, m + j, (*coords)[j]);
        }

    for (int j = 0; j < k; ++j)
    {
        const QMatrix &A = data.h_basis[j];
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                table.set(m + j, b, c, A(c, b));
        for (int l = j + 1; l < k; ++l)
        {
            auto coords = span_coordinates(data.h_basis, commutator(A, data.h_basis[l]));
            if (!coords)
                throw Error("h' is not closed: [" + labels[m + j] + "," + labels[m + l] +
                            "] leaves span(h_basis)");
            for (int c = 0; c < k; ++c)
                table.set(m + j, m + l, m + c, (*coords)[c]);
        }
    }
    (void)n;
    return table.build();
}

LieAlgebra rationalize(const LieAlgebra &algebra, double tol, long max_den)
{
    if (algebra.structure().is_exact())
        return algebra;
    const auto &v = algebra.structure().values<double>();
    std::vector<Rational> q(v.size());
    for (size_t i = 0; i < v.size(); ++i)
    {
        q[i] = homkit::rationalize(v[i], max_den);
        if (std::fabs(q[i].get_d() - v[i]) > tol)
            throw Error("component " + format_double(v[i]) + " has no rational reconstruction");
    }
    return LieAlgebra(algebra.labels(),
                      Tensor::from_values<Rational>(algebra.dim(), kStructureValence, std::move(q)));
}

} // namespace homkit

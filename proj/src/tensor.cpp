#include "homkit/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace homkit
{

namespace
{
size_t ipow(int base, int exp)
{
    size_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= size_t(base);
    return r;
}

void check_slot(const Tensor &t, int slot)
{
    if (slot < 0 || slot >= t.rank())
        throw Error("slot " + std::to_string(slot) + " out of range for rank " +
                    std::to_string(t.rank()));
}

template <class F> decltype(auto) visit_kind(ScalarKind kind, F &&f)
{
    if (kind == ScalarKind::exact)
        return f(Rational());
    return f(double());
}

template <class T> T metric_entry(const Tensor &m, int i, int j)
{
    return m.values<T>()[size_t(i) * m.dim() + j];
}
} // namespace

bool next_index(std::vector<int> &index, int dim)
{
    for (int k = int(index.size()) - 1; k >= 0; --k)
    {
        if (++index[k] < dim)
            return true;
        index[k] = 0;
    }
    return false;
}

Tensor::Tensor(int dim, std::vector<Valence> valence, ScalarKind kind)
    : dim_(dim), valence_(std::move(valence))
{
    if (dim <= 0)
        throw Error("tensor dimension must be positive");
    size_t n = ipow(dim, int(valence_.size()));
    if (kind == ScalarKind::exact)
        data_ = std::vector<Rational>(n, Rational(0));
    else
        data_ = std::vector<double>(n, 0.0);
}

template <class T>
Tensor Tensor::from_values(int dim, std::vector<Valence> valence, std::vector<T> values)
{
    Tensor t(dim, std::move(valence), std::is_same_v<T, double> ? ScalarKind::real : ScalarKind::exact);
    if (values.size() != t.size())
        throw Error("component count does not equal D^r");
    t.data_ = std::move(values);
    return t;
}
template Tensor Tensor::from_values<Rational>(int, std::vector<Valence>, std::vector<Rational>);
template Tensor Tensor::from_values<double>(int, std::vector<Valence>, std::vector<double>);

size_t Tensor::size() const
{
    return std::visit([](const auto &v) { return v.size(); }, data_);
}

size_t Tensor::offset(std::span<const int> index) const
{
    if (int(index.size()) != rank())
        throw Error("index length does not match tensor rank");
    size_t off = 0;
    for (int i : index)
    {
        if (i < 0 || i >= dim_)
            throw Error("index component out of range");
        off = off * dim_ + i;
    }
    return off;
}

Scalar Tensor::get(std::span<const int> index) const
{
    size_t off = offset(index);
    return std::visit([off](const auto &v) { return Scalar(v[off]); }, data_);
}

void Tensor::set(std::span<const int> index, const Scalar &value)
{
    size_t off = offset(index);
    if (value.kind() != kind())
        throw TagMismatch();
    if (is_exact())
        std::get<std::vector<Rational>>(data_)[off] = value.rational();
    else
        std::get<std::vector<double>>(data_)[off] = value.real();
}

template <class T> const std::vector<T> &Tensor::values() const
{
    if (auto p = std::get_if<std::vector<T>>(&data_))
        return *p;
    throw TagMismatch();
}
template <class T> std::vector<T> &Tensor::values()
{
    if (auto p = std::get_if<std::vector<T>>(&data_))
        return *p;
    throw TagMismatch();
}
template const std::vector<Rational> &Tensor::values<Rational>() const;
template const std::vector<double> &Tensor::values<double>() const;
template std::vector<Rational> &Tensor::values<Rational>();
template std::vector<double> &Tensor::values<double>();

bool Tensor::is_zero() const
{
    return std::visit(
        [](const auto &v) {
            return std::all_of(v.begin(), v.end(), [](const auto &x) { return homkit::is_zero(x); });
        },
        data_);
}

bool operator==(const Tensor &a, const Tensor &b)
{
    return a.dim_ == b.dim_ && a.valence_ == b.valence_ && a.data_ == b.data_;
}

namespace
{
template <class Op> Tensor elementwise(const Tensor &a, const Tensor &b, Op op)
{
    if (a.dim() != b.dim() || a.valence() != b.valence())
        throw Error("tensor shapes differ");
    if (a.kind() != b.kind())
        throw TagMismatch();
    Tensor out = Tensor::zeros_like(a);
    visit_kind(a.kind(), [&](auto tag) {
        using T = decltype(tag);
        auto &o = out.values<T>();
        const auto &x = a.values<T>();
        const auto &y = b.values<T>();
        for (size_t i = 0; i < o.size(); ++i)
            o[i] = op(x[i], y[i]);
        return 0;
    });
    return out;
}
} // namespace

Tensor operator+(const Tensor &a, const Tensor &b)
{
    return elementwise(a, b, [](const auto &x, const auto &y) {
        using T = std::decay_t<decltype(x)>;
        return T(x + y);
    });
}
Tensor operator-(const Tensor &a, const Tensor &b)
{
    return elementwise(a, b, [](const auto &x, const auto &y) {
        using T = std::decay_t<decltype(x)>;
        return T(x - y);
    });
}
Tensor operator*(const Scalar &s, const Tensor &t)
{
    if (s.kind() != t.kind())
        throw TagMismatch();
    Tensor out = t;
    if (t.is_exact())
        for (auto &v : out.values<Rational>())
            v *= s.rational();
    else
        for (auto &v : out.values<double>())
            v *= s.real();
    return out;
}

Scalar max_abs(const Tensor &t)
{
    if (t.is_exact())
    {
        Rational m = 0;
        for (const auto &v : t.values<Rational>())
            if (abs(v) > m)
                m = abs(v);
        return Scalar(m);
    }
    double m = 0;
    for (double v : t.values<double>())
        m = std::max(m, std::fabs(v));
    return Scalar(m);
}

// ---------------------------------------------------------------------------
// FrameMetric

namespace
{
template <class T> void check_metric(const Matrix<T> &g, const Matrix<T> &ginv)
{
    int n = g.rows();
    Matrix<T> prod = g * ginv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
        {
            T expect = i == j ? T(1) : T(0);
            if constexpr (std::is_same_v<T, double>)
            {
                if (std::fabs(prod(i, j) - expect) >= 1e-13)
                    throw InputError("metric inverse residual exceeds 1e-13");
            }
            else if (prod(i, j) != expect)
                throw Error("metric inverse check failed");
        }
}

template <class T> void check_symmetric(const Matrix<T> &g)
{
    if (g.rows() != g.cols() || g.rows() == 0)
        throw InputError("metric must be a non-empty square matrix");
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (g(i, j) != g(j, i))
                throw InputError("metric is not symmetric");
}

template <class T> Tensor matrix_tensor(const Matrix<T> &m, Valence v)
{
    return Tensor::from_values<T>(m.rows(), {v, v}, m.data());
}
} // namespace

FrameMetric::FrameMetric(const QMatrix &g)
{
    check_symmetric(g);
    auto inv = inverse(g);
    if (!inv)
        throw InputError("metric is degenerate (det g = 0)");
    check_metric(g, *inv);
    g_ = matrix_tensor(g, Valence::down);
    g_inv_ = matrix_tensor(*inv, Valence::up);
}

FrameMetric::FrameMetric(const DMatrix &g)
{
    check_symmetric(g);
    auto inv = inverse(g);
    if (!inv)
        throw InputError("metric is degenerate (det g = 0)");
    check_metric(g, *inv);
    g_ = matrix_tensor(g, Valence::down);
    g_inv_ = matrix_tensor(*inv, Valence::up);
}

FrameMetric FrameMetric::euclidean(int dim) { return FrameMetric(QMatrix::identity(dim)); }

FrameMetric FrameMetric::light_cone(int n)
{
    QMatrix g(n + 2, n + 2);
    g(0, 1) = g(1, 0) = 1;
    for (int i = 0; i < n; ++i)
        g(2 + i, 2 + i) = 1;
    return FrameMetric(g);
}

// ---------------------------------------------------------------------------
// Slot operations

namespace
{
template <class T>
Tensor contract_impl(const Tensor &t, int a, int b, const Tensor *pairing)
{
    int D = t.dim();
    std::vector<Valence> val;
    for (int k = 0; k < t.rank(); ++k)
        if (k != a && k != b)
            val.push_back(t.valence()[k]);
    Tensor out(D, val, t.kind());
    auto &o = out.values<T>();
    const auto &x = t.values<T>();
    std::vector<int> idx(t.rank(), 0);
    do
    {
        T w;
        if (pairing)
        {
            w = metric_entry<T>(*pairing, idx[a], idx[b]);
            if (homkit::is_zero(w))
                continue;
        }
        else
        {
            if (idx[a] != idx[b])
                continue;
            w = T(1);
        }
        const T &v = x[t.offset(idx)];
        if (homkit::is_zero(v))
            continue;
        size_t off = 0;
        for (int k = 0; k < t.rank(); ++k)
            if (k != a && k != b)
                off = off * D + idx[k];
        o[off] += w * v;
    } while (next_index(idx, D));
    return out;
}

void check_pair(const Tensor &t, int a, int b)
{
    check_slot(t, a);
    check_slot(t, b);
    if (a == b)
        throw Error("contract: slots must be distinct");
}
} // namespace

Tensor contract(const Tensor &t, int slot_a, int slot_b)
{
    check_pair(t, slot_a, slot_b);
    if (t.valence()[slot_a] == t.valence()[slot_b])
        throw Error("contract: like-valence slots need a metric");
    return visit_kind(t.kind(), [&](auto tag) {
        return contract_impl<decltype(tag)>(t, slot_a, slot_b, nullptr);
    });
}

Tensor contract(const Tensor &t, int slot_a, int slot_b, const FrameMetric &metric)
{
    check_pair(t, slot_a, slot_b);
    if (t.valence()[slot_a] != t.valence()[slot_b])
        return contract(t, slot_a, slot_b);
    if (metric.dim() != t.dim())
        throw Error("contract: metric dimension mismatch");
    if (metric.kind() != t.kind())
        throw TagMismatch();
    const Tensor &pairing = t.valence()[slot_a] == Valence::down ? metric.g_inv() : metric.g();
    return visit_kind(t.kind(), [&](auto tag) {
        return contract_impl<decltype(tag)>(t, slot_a, slot_b, &pairing);
    });
}

Tensor permute_slots(const Tensor &t, std::span<const int> perm)
{
    if (int(perm.size()) != t.rank())
        throw Error("permutation length does not match rank");
    std::vector<int> check(perm.begin(), perm.end());
    std::sort(check.begin(), check.end());
    for (int k = 0; k < t.rank(); ++k)
        if (check[k] != k)
            throw Error("not a permutation of the slots");
    std::vector<Valence> val(t.rank());
    for (int k = 0; k < t.rank(); ++k)
        val[k] = t.valence()[perm[k]];
    Tensor out(t.dim(), val, t.kind());
    std::vector<int> idx(t.rank(), 0), src(t.rank());
    visit_kind(t.kind(), [&](auto tag) {
        using T = decltype(tag);
        auto &o = out.values<T>();
        const auto &x = t.values<T>();
        size_t k = 0;
        do
        {
            for (int s = 0; s < t.rank(); ++s)
                src[perm[s]] = idx[s];
            o[k++] = x[t.offset(src)];
        } while (t.rank() > 0 && next_index(idx, t.dim()));
        return 0;
    });
    return out;
}

Tensor permute_slots(const Tensor &t, std::initializer_list<int> perm)
{
    return permute_slots(t, std::span<const int>(perm.begin(), perm.size()));
}

Tensor antisymmetrize(const Tensor &t, std::span<const int> slots)
{
    for (int s : slots)
        check_slot(t, s);
    std::vector<int> sorted(slots.begin(), slots.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error("antisymmetrize: slots must be distinct");
    for (int s : slots)
        if (t.valence()[s] != t.valence()[slots[0]])
            throw Error("antisymmetrize: mixed valence among slots");
    if (slots.size() < 2)
        return t;

    // Sum sign(sigma) * t with the listed slots permuted by sigma.
    std::vector<int> order(slots.size());
    std::iota(order.begin(), order.end(), 0);
    Tensor sum = Tensor::zeros_like(t);
    long count = 0;
    do
    {
        int inversions = 0;
        for (size_t i = 0; i < order.size(); ++i)
            for (size_t j = i + 1; j < order.size(); ++j)
                if (order[i] > order[j])
                    ++inversions;
        std::vector<int> perm(t.rank());
        std::iota(perm.begin(), perm.end(), 0);
        for (size_t i = 0; i < slots.size(); ++i)
            perm[slots[i]] = slots[order[i]];
        Tensor term = permute_slots(t, perm);
        sum = inversions % 2 == 0 ? sum + term : sum - term;
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));

    Scalar norm = t.is_exact() ? Scalar(Rational(1, count)) : Scalar(1.0 / double(count));
    return norm * sum;
}

Tensor antisymmetrize(const Tensor &t, std::initializer_list<int> slots)
{
    return antisymmetrize(t, std::span<const int>(slots.begin(), slots.size()));
}

Tensor raise_lower(const Tensor &t, int slot, const FrameMetric &metric)
{
    check_slot(t, slot);
    if (metric.dim() != t.dim())
        throw Error("raise_lower: metric dimension mismatch");
    if (metric.kind() != t.kind())
        throw TagMismatch();
    bool lowering = t.valence()[slot] == Valence::up;
    const Tensor &m = lowering ? metric.g() : metric.g_inv();
    std::vector<Valence> val = t.valence();
    val[slot] = lowering ? Valence::down : Valence::up;
    Tensor out(t.dim(), val, t.kind());
    int D = t.dim();
    visit_kind(t.kind(), [&](auto tag) {
        using T = decltype(tag);
        auto &o = out.values<T>();
        const auto &x = t.values<T>();
        std::vector<int> idx(t.rank(), 0), src;
        size_t k = 0;
        do
        {
            T acc(0);
            src = idx;
            for (int j = 0; j < D; ++j)
            {
                const T &w = metric_entry<T>(m, idx[slot], j);
                if (homkit::is_zero(w))
                    continue;
                src[slot] = j;
                acc += w * x[t.offset(src)];
            }
            o[k++] = acc;
        } while (next_index(idx, D));
        return 0;
    });
    return out;
}

Tensor outer(const Tensor &a, const Tensor &b)
{
    if (a.dim() != b.dim())
        throw Error("outer: dimension mismatch");
    if (a.kind() != b.kind())
        throw TagMismatch();
    std::vector<Valence> val = a.valence();
    val.insert(val.end(), b.valence().begin(), b.valence().end());
    Tensor out(a.dim(), val, a.kind());
    visit_kind(a.kind(), [&](auto tag) {
        using T = decltype(tag);
        auto &o = out.values<T>();
        const auto &x = a.values<T>();
        const auto &y = b.values<T>();
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j)
                o[i * y.size() + j] = x[i] * y[j];
        return 0;
    });
    return out;
}

Tensor change_frame(const Tensor &t, const QMatrix &p)
{
    if (!t.is_exact())
        throw TagMismatch();
    int D = t.dim();
    if (p.rows() != D || p.cols() != D)
        throw Error("change_frame: matrix shape mismatch");
    auto pinv = inverse(p);
    if (!pinv)
        throw Error("change_frame: singular frame matrix");
    Tensor cur = t;
    for (int s = 0; s < t.rank(); ++s)
    {
        Tensor next = Tensor::zeros_like(cur);
        auto &o = next.values<Rational>();
        const auto &x = cur.values<Rational>();
        bool lower = cur.valence()[s] == Valence::down;
        std::vector<int> idx(t.rank(), 0), src;
        size_t k = 0;
        do
        {
            Rational acc = 0;
            src = idx;
            for (int j = 0; j < D; ++j)
            {
                // lower: T'_{..a..} = P_{ja} T_{..j..}; upper: T'^{..a..} = Pinv_{aj} T^{..j..}
                const Rational &w = lower ? p(j, idx[s]) : (*pinv)(idx[s], j);
                if (sgn(w) == 0)
                    continue;
                src[s] = j;
                acc += w * x[cur.offset(src)];
            }
            o[k++] = acc;
        } while (next_index(idx, D));
        cur = std::move(next);
    }
    return cur;
}

} // namespace homkit

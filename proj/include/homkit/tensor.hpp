#pragma once

#include "homkit/matrix.hpp"
#include "homkit/scalar.hpp"

#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace homkit
{

/// Position of a tensor slot.
enum class Valence : char
{
    up = 'u',
    down = 'd'
};

/// Dense multi-index array over a D-dimensional frame. Components are stored
/// lexicographically with slot 0 most significant: the component
/// (i0, i1, ..., i_{r-1}) lives at i0*D^{r-1} + ... + i_{r-1}. All components
/// carry the same scalar tag.
class Tensor
{
  public:
    Tensor() : Tensor(1, {}, ScalarKind::exact) {}
    Tensor(int dim, std::vector<Valence> valence, ScalarKind kind);

    template <class T>
    static Tensor from_values(int dim, std::vector<Valence> valence, std::vector<T> values);

    static Tensor zeros_like(const Tensor &t) { return Tensor(t.dim(), t.valence(), t.kind()); }

    int dim() const { return dim_; }
    int rank() const { return int(valence_.size()); }
    const std::vector<Valence> &valence() const { return valence_; }
    ScalarKind kind() const
    {
        return std::holds_alternative<std::vector<Rational>>(data_) ? ScalarKind::exact
                                                                     : ScalarKind::real;
    }
    bool is_exact() const { return kind() == ScalarKind::exact; }
    size_t size() const;

    size_t offset(std::span<const int> index) const;
    size_t offset(std::initializer_list<int> index) const
    {
        return offset(std::span<const int>(index.begin(), index.size()));
    }

    Scalar get(std::span<const int> index) const;
    Scalar get(std::initializer_list<int> index) const
    {
        return get(std::span<const int>(index.begin(), index.size()));
    }
    void set(std::span<const int> index, const Scalar &value);
    void set(std::initializer_list<int> index, const Scalar &value)
    {
        set(std::span<const int>(index.begin(), index.size()), value);
    }

    template <class T> const std::vector<T> &values() const;
    template <class T> std::vector<T> &values();

    bool is_zero() const;

    friend bool operator==(const Tensor &a, const Tensor &b);
    friend Tensor operator+(const Tensor &a, const Tensor &b);
    friend Tensor operator-(const Tensor &a, const Tensor &b);
    friend Tensor operator*(const Scalar &s, const Tensor &t);

  private:
    int dim_;
    std::vector<Valence> valence_;
    std::variant<std::vector<Rational>, std::vector<double>> data_;
};

/// Constant invertible symmetric bilinear form on the frame.
class FrameMetric
{
  public:
    explicit FrameMetric(const QMatrix &g);
    explicit FrameMetric(const DMatrix &g);

    static FrameMetric euclidean(int dim);
    /// Light-cone frame (+, -, 1..n): eta_{+-} = 1, eta_{ij} = delta_ij.
    static FrameMetric light_cone(int n);

    int dim() const { return g_.dim(); }
    ScalarKind kind() const { return g_.kind(); }
    const Tensor &g() const { return g_; }
    const Tensor &g_inv() const { return g_inv_; }

  private:
    Tensor g_;
    Tensor g_inv_;
};

Scalar max_abs(const Tensor &t);

/// Pairs slots a and b. When both slots share a valence the pairing goes
/// through the metric (g_inv for two lower slots, g for two upper ones).
Tensor contract(const Tensor &t, int slot_a, int slot_b);
Tensor contract(const Tensor &t, int slot_a, int slot_b, const FrameMetric &metric);

/// Average over signed permutations of the listed slots.
Tensor antisymmetrize(const Tensor &t, std::span<const int> slots);
Tensor antisymmetrize(const Tensor &t, std::initializer_list<int> slots);

/// Flips the valence of one slot using g or g_inv.
Tensor raise_lower(const Tensor &t, int slot, const FrameMetric &metric);

/// Reorders slots: result slot k is input slot perm[k].
Tensor permute_slots(const Tensor &t, std::span<const int> perm);
Tensor permute_slots(const Tensor &t, std::initializer_list<int> perm);

Tensor outer(const Tensor &a, const Tensor &b);

/// Components transform as T'_{a...} = P^x_a ... T_{x...} for lower slots and with
/// P^{-1} for upper slots, where P's columns are the new frame vectors in old
/// components.
Tensor change_frame(const Tensor &t, const QMatrix &p);

/// Advance a multi-index odometer; returns false after the last index.
bool next_index(std::vector<int> &index, int dim);

} // namespace homkit

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace homkit
{

using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (maps to CLI exit code 2).
class InputError : public Error
{
  public:
    using Error::Error;
};

/// Arithmetic between an exact and a floating scalar.
class TagMismatch : public Error
{
  public:
    TagMismatch() : Error("mixed exact/float scalar arithmetic") {}
};

enum class ScalarKind
{
    exact,
    real
};

/// Tagged scalar: an arbitrary-precision rational or a binary64 float.
/// Arithmetic never promotes between the two tags.
class Scalar
{
  public:
    Scalar() : value_(Rational(0)) {}
    Scalar(Rational q) : value_(std::move(q)) { std::get<Rational>(value_).canonicalize(); }
    Scalar(double d) : value_(d) {}
    Scalar(int i) : value_(Rational(i)) {}

    static Scalar zero(ScalarKind kind)
    {
        return kind == ScalarKind::exact ? Scalar(Rational(0)) : Scalar(0.0);
    }

    ScalarKind kind() const
    {
        return std::holds_alternative<Rational>(value_) ? ScalarKind::exact
                                                        : ScalarKind::real;
    }
    bool is_exact() const { return kind() == ScalarKind::exact; }

    const Rational &rational() const;
    double real() const;
    /// Lossy view used for reporting only.
    double to_double() const;

    bool is_zero() const;
    Scalar abs() const;
    int sign() const;

    /// "p/q" (or "p") for exact values, shortest round-trip decimal for floats.
    std::string str() const;

    friend Scalar operator+(const Scalar &a, const Scalar &b);
    friend Scalar operator-(const Scalar &a, const Scalar &b);
    friend Scalar operator*(const Scalar &a, const Scalar &b);
    friend Scalar operator/(const Scalar &a, const Scalar &b);
    Scalar operator-() const;
    friend bool operator==(const Scalar &a, const Scalar &b);
    friend bool operator<(const Scalar &a, const Scalar &b);

  private:
    std::variant<Rational, double> value_;
};

/// Parses "p/q", "p", or a decimal literal like "-0.25" into an exact rational.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational &q);
std::string format_double(double d);

inline double to_double(const Rational &q) { return q.get_d(); }
inline double to_double(double d) { return d; }

inline bool is_zero(const Rational &q) { return sgn(q) == 0; }
inline bool is_zero(double d) { return d == 0.0; }

inline Rational abs_value(const Rational &q) { return abs(q); }
inline double abs_value(double d) { return d < 0 ? -d : d; }

/// Nearest rational with denominator at most max_den (continued fractions).
Rational rationalize(double x, long max_den = 1000000);

} // namespace homkit

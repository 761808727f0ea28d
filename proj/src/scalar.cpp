#include "homkit/scalar.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace homkit
{

const Rational &Scalar::rational() const
{
    if (auto p = std::get_if<Rational>(&value_))
        return *p;
    throw TagMismatch();
}

double Scalar::real() const
{
    if (auto p = std::get_if<double>(&value_))
        return *p;
    throw TagMismatch();
}

double Scalar::to_double() const
{
    return std::visit([](const auto &v) { return homkit::to_double(v); }, value_);
}

bool Scalar::is_zero() const
{
    return std::visit([](const auto &v) { return homkit::is_zero(v); }, value_);
}

Scalar Scalar::abs() const
{
    return std::visit([](const auto &v) { return Scalar(abs_value(v)); }, value_);
}

int Scalar::sign() const
{
    if (auto p = std::get_if<Rational>(&value_))
        return sgn(*p);
    double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
}

std::string Scalar::str() const
{
    if (auto p = std::get_if<Rational>(&value_))
        return format_rational(*p);
    return format_double(std::get<double>(value_));
}

namespace
{
template <class Op> Scalar combine(const Scalar &a, const Scalar &b, Op op)
{
    if (a.kind() != b.kind())
        throw TagMismatch();
    if (a.is_exact())
        return Scalar(Rational(op(a.rational(), b.rational())));
    return Scalar(op(a.real(), b.real()));
}
} // namespace

Scalar operator+(const Scalar &a, const Scalar &b)
{
    return combine(a, b, [](const auto &x, const auto &y) { return x + y; });
}
Scalar operator-(const Scalar &a, const Scalar &b)
{
    return combine(a, b, [](const auto &x, const auto &y) { return x - y; });
}
Scalar operator*(const Scalar &a, const Scalar &b)
{
    return combine(a, b, [](const auto &x, const auto &y) { return x * y; });
}
Scalar operator/(const Scalar &a, const Scalar &b)
{
    if (b.is_zero())
        throw Error("division by zero");
    return combine(a, b, [](const auto &x, const auto &y) { return x / y; });
}

Scalar Scalar::operator-() const
{
    if (is_exact())
        return Scalar(Rational(-rational()));
    return Scalar(-real());
}

bool operator==(const Scalar &a, const Scalar &b)
{
    if (a.kind() != b.kind())
        throw TagMismatch();
    if (a.is_exact())
        return a.rational() == b.rational();
    return a.real() == b.real();
}

bool operator<(const Scalar &a, const Scalar &b)
{
    if (a.kind() != b.kind())
        throw TagMismatch();
    if (a.is_exact())
        return a.rational() < b.rational();
    return a.real() < b.real();
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])))
        ++start;
    s = s.substr(start);
    if (s.empty())
        throw InputError("empty rational literal");

    auto dot = s.find('.');
    if (dot != std::string::npos)
    {
        // exact decimal: "-12.375" -> -12375/1000
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t scale = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw InputError("bad rational literal '" + s + "'");
        mpz_class num;
        if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0)
            throw InputError("bad rational literal '" + s + "'");
        mpz_class den = 1;
        for (size_t i = 0; i < scale; ++i)
            den *= 10;
        Rational q(num, den);
        q.canonicalize();
        return q;
    }

    Rational q;
    std::string body = s[0] == '+' ? s.substr(1) : s;
    if (q.set_str(body, 10) != 0)
        throw InputError("bad rational literal '" + s + "'");
    if (q.get_den() == 0)
        throw InputError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational &q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_str(10);
}

std::string format_double(double d)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

Rational rationalize(double x, long max_den)
{
    if (!std::isfinite(x))
        throw Error("cannot rationalize a non-finite value");
    // Stern-Brocot style continued-fraction convergents.
    long sign = x < 0 ? -1 : 1;
    double r = std::fabs(x);
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = r;
    for (int iter = 0; iter < 64; ++iter)
    {
        double a = std::floor(frac);
        mpz_class ai(a);
        mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den)
            break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = frac - a;
        if (rem < 1e-15)
            break;
        frac = 1.0 / rem;
    }
    Rational q(sign * p1, q1);
    q.canonicalize();
    return q;
}

} // namespace homkit

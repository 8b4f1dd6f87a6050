#include "cycletrace/rational.hpp"

#include <ostream>

#include "cycletrace/errors.hpp"

namespace cycletrace
{

Rational::Rational(const Integer& num, const Integer& den)
{
    if (den == 0)
        throw DivisionByZero("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational Rational::parse(const std::string& text)
{
    const auto slash = text.find('/');
    Integer num;
    Integer den = 1;
    try
    {
        if (slash == std::string::npos)
        {
            num = Integer(text);
        }
        else
        {
            num = Integer(text.substr(0, slash));
            den = Integer(text.substr(slash + 1));
        }
    }
    catch (const std::invalid_argument&)
    {
        throw InvalidArgument("not a rational: '" + text + "'");
    }
    return Rational(num, den);
}

std::string Rational::to_string() const
{
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& o)
{
    value_ += o.value_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o)
{
    value_ -= o.value_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o)
{
    value_ *= o.value_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw DivisionByZero("rational division by zero");
    value_ /= o.value_;
    return *this;
}

Rational Rational::operator-() const
{
    Rational r;
    r.value_ = -value_;
    return r;
}

Rational pow(const Rational& base, long exp)
{
    if (exp < 0)
    {
        if (base.is_zero())
            throw DivisionByZero("zero to a negative power");
        return Rational(1) / pow(base, -exp);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), static_cast<unsigned long>(exp));
    mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), static_cast<unsigned long>(exp));
    return Rational(num, den);
}

Integer binomial(unsigned long n, unsigned long k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r)
{
    return os << r.to_string();
}

} // namespace cycletrace

#pragma once

#include <cstdint>
#include <vector>

#include "cycletrace/rational.hpp"

namespace cycletrace
{

/// D = D0 * f^2 with D0 a fundamental discriminant and f >= 1.
struct DiscriminantFactorization
{
    Integer D;
    Integer D0;
    Integer f;
};

/// Exact coefficients of the Legendre polynomial P_n; coeffs[j] multiplies x^j.
struct LegendreCoeffs
{
    unsigned degree = 0;
    std::vector<Rational> coeffs;

    Rational operator()(const Rational& x) const;
};

/// Bernoulli number B_n with B_1 = -1/2. Values are memoized in a table shared
/// across threads (fills are serialized and idempotent).
Rational bernoulli_number(unsigned n);

/// B_k(x) = sum_j C(k, j) B_j x^(k - j).
Rational bernoulli_polynomial(unsigned k, const Rational& x);

/// P_n from (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.
LegendreCoeffs legendre_coeffs(unsigned n);

/// Kronecker symbol (D0 / m) for m >= 1.
int kronecker_symbol(const Integer& D0, const Integer& m);
int kronecker_symbol(std::int64_t D0, std::int64_t m);

int moebius(std::uint64_t n);

/// sigma_{1-2k}(n) = sum_{d | n} d^(1-2k).
Rational divisor_sum_neg(std::uint64_t n, unsigned k);

std::vector<std::uint64_t> divisors(std::uint64_t n);

bool is_discriminant(const Integer& D);
bool is_perfect_square(const Integer& n);
bool is_fundamental_discriminant(const Integer& D);

/// Canonical split of a positive discriminant; NotADiscriminant otherwise.
DiscriminantFactorization factor_discriminant(const Integer& D);

} // namespace cycletrace

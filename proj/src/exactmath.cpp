#include "cycletrace/exactmath.hpp"

#include <mutex>

#include "cycletrace/errors.hpp"

namespace cycletrace
{

namespace
{

struct BernoulliTable
{
    std::mutex mutex;
    std::vector<Rational> values{Rational(1)};
};

BernoulliTable& bernoulli_table()
{
    static BernoulliTable table;
    return table;
}

// Largest s with s^2 | n, and the squarefree cofactor.
std::pair<Integer, Integer> square_split(const Integer& n_in)
{
    if (n_in.fits_ulong_p())
    {
        unsigned long n = n_in.get_ui();
        unsigned long root = 1, squarefree = 1;
        for (unsigned long p = 2; p * p <= n; ++p)
        {
            unsigned e = 0;
            while (n % p == 0)
            {
                n /= p;
                ++e;
            }
            for (unsigned i = 0; i < e / 2; ++i)
                root *= p;
            if (e % 2 == 1)
                squarefree *= p;
        }
        return {Integer(root), Integer(squarefree * n)};
    }
    Integer n = n_in;
    Integer root = 1;
    Integer squarefree = 1;
    for (Integer p = 2; p * p <= n; ++p)
    {
        unsigned e = 0;
        while (n % p == 0)
        {
            n /= p;
            ++e;
        }
        for (unsigned i = 0; i < e / 2; ++i)
            root *= p;
        if (e % 2 == 1)
            squarefree *= p;
    }
    return {root, squarefree * n};
}

Integer mod4(const Integer& n)
{
    Integer r = n % 4;
    if (r < 0)
        r += 4;
    return r;
}

} // namespace

Rational LegendreCoeffs::operator()(const Rational& x) const
{
    Rational acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

Rational bernoulli_number(unsigned n)
{
    auto& table = bernoulli_table();
    std::lock_guard lock(table.mutex);
    auto& b = table.values;
    while (b.size() <= n)
    {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0 solved for B_m.
        const unsigned m = static_cast<unsigned>(b.size());
        Rational acc;
        for (unsigned j = 0; j < m; ++j)
            acc += Rational(binomial(m + 1, j)) * b[j];
        b.push_back(-acc / Rational(m + 1));
    }
    return b[n];
}

Rational bernoulli_polynomial(unsigned k, const Rational& x)
{
    Rational acc;
    Rational xp = 1;
    // j descends so that x^(k - j) can be built incrementally.
    for (unsigned j = k + 1; j-- > 0;)
    {
        acc += Rational(binomial(k, j)) * bernoulli_number(j) * xp;
        xp *= x;
    }
    return acc;
}

LegendreCoeffs legendre_coeffs(unsigned n)
{
    std::vector<Rational> prev{Rational(1)};
    if (n == 0)
        return {0, prev};
    std::vector<Rational> cur{Rational(0), Rational(1)};
    for (unsigned m = 1; m < n; ++m)
    {
        std::vector<Rational> next(m + 2);
        const Rational a(Integer(2 * m + 1), Integer(m + 1));
        const Rational b(Integer(m), Integer(m + 1));
        for (unsigned j = 0; j <= m; ++j)
            next[j + 1] += a * cur[j];
        for (unsigned j = 0; j < prev.size(); ++j)
            next[j] -= b * prev[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {n, cur};
}

int kronecker_symbol(const Integer& D0, const Integer& m)
{
    if (m < 1)
        throw InvalidArgument("kronecker_symbol: bottom argument must be positive");
    Integer a = D0;
    Integer n = m;
    int result = 1;

    // Factor out powers of two from n with the (a/2) rule.
    while (n % 2 == 0)
    {
        n /= 2;
        if (a % 2 == 0)
            return 0;
        const unsigned long r = mpz_fdiv_ui(a.get_mpz_t(), 8);
        if (r == 3 || r == 5)
            result = -result;
    }

    // Jacobi symbol (a/n) for odd n >= 1.
    a %= n;
    if (a < 0)
        a += n;
    while (a != 0)
    {
        while (a % 2 == 0)
        {
            a /= 2;
            const unsigned long r = mpz_fdiv_ui(n.get_mpz_t(), 8);
            if (r == 3 || r == 5)
                result = -result;
        }
        std::swap(a, n);
        if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3)
            result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int kronecker_symbol(std::int64_t D0, std::int64_t m)
{
    return kronecker_symbol(Integer(static_cast<long>(D0)), Integer(static_cast<long>(m)));
}

int moebius(std::uint64_t n)
{
    if (n == 0)
        throw InvalidArgument("moebius: n must be positive");
    int result = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p)
    {
        if (n % p != 0)
            continue;
        n /= p;
        if (n % p == 0)
            return 0;
        result = -result;
    }
    if (n > 1)
        result = -result;
    return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= n; ++d)
    {
        if (n % d != 0)
            continue;
        small.push_back(d);
        if (d != n / d)
            large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

Rational divisor_sum_neg(std::uint64_t n, unsigned k)
{
    if (n == 0 || k == 0)
        throw InvalidArgument("divisor_sum_neg: n and k must be positive");
    Rational acc;
    for (auto d : divisors(n))
        acc += pow(Rational(Integer(static_cast<unsigned long>(d))), 1 - 2 * static_cast<long>(k));
    return acc;
}

bool is_discriminant(const Integer& D)
{
    const Integer r = mod4(D);
    return r == 0 || r == 1;
}

bool is_perfect_square(const Integer& n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_fundamental_discriminant(const Integer& D)
{
    if (D == 0 || D == 1)
        return false;
    const Integer r = mod4(D);
    if (r == 1)
        return square_split(abs(D)).first == 1;
    if (r != 0)
        return false;
    const Integer m = D / 4;
    const Integer rm = mod4(m);
    return (rm == 2 || rm == 3) && square_split(abs(m)).first == 1;
}

DiscriminantFactorization factor_discriminant(const Integer& D)
{
    if (D <= 0 || !is_discriminant(D))
        throw NotADiscriminant("not a positive discriminant: " + D.get_str());
    auto [s, m] = square_split(D);
    if (mod4(m) == 1)
        return {D, m, s};
    // m = 2, 3 mod 4 forces s even since D = 0 mod 4.
    return {D, 4 * m, s / 2};
}

} // namespace cycletrace

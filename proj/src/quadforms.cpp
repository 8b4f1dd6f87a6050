#include "cycletrace/quadforms.hpp"

#include <algorithm>
#include <set>

#include "cycletrace/errors.hpp"
#include "cycletrace/exactmath.hpp"

namespace cycletrace
{

namespace
{

std::strong_ordering cmp_int(const Integer& x, const Integer& y)
{
    const int c = cmp(x, y);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Integer floor_div(const Integer& x, const Integer& y)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return q;
}

Integer mod_floor(const Integer& x, const Integer& m)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

void require_indefinite(const Integer& D)
{
    if (D <= 0 || !is_discriminant(D))
        throw NotADiscriminant("not a positive discriminant: " + D.get_str());
    if (is_perfect_square(D))
        throw SquareDiscriminant("discriminant " + D.get_str() + " is a perfect square");
}

void require_posdef(const BinaryQuadraticForm& Q)
{
    if (Q.is_zero())
        throw ZeroForm("the zero form has no class");
    if (Q.disc() >= 0 || Q.a <= 0)
        throw NotPositiveDefinite(Q.to_string() + " is not positive definite");
}

} // namespace

Integer BinaryQuadraticForm::content() const
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

std::string BinaryQuadraticForm::to_string() const
{
    return "[" + a.get_str() + "," + b.get_str() + "," + c.get_str() + "]";
}

std::strong_ordering operator<=>(const BinaryQuadraticForm& x, const BinaryQuadraticForm& y)
{
    if (auto o = cmp_int(x.a, y.a); o != 0)
        return o;
    if (auto o = cmp_int(x.b, y.b); o != 0)
        return o;
    return cmp_int(x.c, y.c);
}

BinaryQuadraticForm make_form(long a, long b, long c)
{
    return {Integer(a), Integer(b), Integer(c)};
}

Matrix2 operator*(const Matrix2& x, const Matrix2& y)
{
    return {x.p * y.p + x.q * y.r, x.p * y.q + x.q * y.s, x.r * y.p + x.s * y.r, x.r * y.q + x.s * y.s};
}

BinaryQuadraticForm act(const BinaryQuadraticForm& Q, const Matrix2& M)
{
    const auto& [a, b, c] = Q;
    return {a * M.p * M.p + b * M.p * M.r + c * M.r * M.r,
            2 * a * M.p * M.q + b * (M.p * M.s + M.q * M.r) + 2 * c * M.r * M.s,
            a * M.q * M.q + b * M.q * M.s + c * M.s * M.s};
}

bool is_reduced_posdef(const BinaryQuadraticForm& Q)
{
    if (abs(Q.b) > Q.a || Q.a > Q.c)
        return false;
    if ((abs(Q.b) == Q.a || Q.a == Q.c) && Q.b < 0)
        return false;
    return true;
}

BinaryQuadraticForm reduce_posdef(const BinaryQuadraticForm& Q)
{
    require_posdef(Q);
    const Integer d = Q.disc();
    BinaryQuadraticForm R = Q;
    for (;;)
    {
        // Translate b into (-a, a].
        const Integer t = floor_div(R.a - R.b, 2 * R.a);
        R.b += 2 * R.a * t;
        R.c = (R.b * R.b - d) / (4 * R.a);
        if (R.a > R.c)
        {
            std::swap(R.a, R.c);
            R.b = -R.b;
            continue;
        }
        break;
    }
    if (R.a == R.c && R.b < 0)
        R.b = -R.b;
    return R;
}

bool is_equivalent_posdef(const BinaryQuadraticForm& Q1, const BinaryQuadraticForm& Q2)
{
    if (Q1.disc() != Q2.disc())
        throw DiscriminantMismatch(Q1.to_string() + " and " + Q2.to_string() + " differ in discriminant");
    return reduce_posdef(Q1) == reduce_posdef(Q2);
}

CMPoint cm_point(const BinaryQuadraticForm& A)
{
    require_posdef(A);
    return {Rational(-A.b, 2 * A.a), Rational(Integer(1), 2 * A.a), A.disc(), A};
}

int stabilizer_order(const Integer& d)
{
    if (d >= 0 || !is_discriminant(d))
        throw NotADiscriminant("not a negative discriminant: " + d.get_str());
    if (d == -3)
        return 3;
    if (d == -4)
        return 2;
    return 1;
}

int stabilizer_order(const BinaryQuadraticForm& A)
{
    require_posdef(A);
    return stabilizer_order(primitive_part(A).second.disc());
}

Integer inner_product_qnum(const BinaryQuadraticForm& Q, const BinaryQuadraticForm& A)
{
    if (A.disc() >= 0 || A.a <= 0)
        throw NotPositiveDefinite(A.to_string() + " is not positive definite");
    return 2 * Q.a * A.c - Q.b * A.b + 2 * A.a * Q.c;
}

Integer isqrt(const Integer& n)
{
    if (n < 0)
        throw InvalidArgument("isqrt of a negative number");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

PellSolution pell_fundamental(const Integer& D)
{
    require_indefinite(D);
    // Continued fraction of omega = (P0 + sqrt(D)) / 2 with P0 = D mod 2, i.e. the
    // generator of the maximal order of discriminant D; a convergent h/k gives the
    // unit h - k * conj(omega) = (t + u sqrt(D)) / 2 with t = 2h - P0 k, u = k.
    const Integer s = isqrt(D);
    const Integer P0 = mod_floor(D, 2);
    Integer P = P0;
    Integer Q = 2;
    Integer h_prev = 1, h_prev2 = 0;
    Integer k_prev = 0, k_prev2 = 1;
    for (;;)
    {
        const Integer a = floor_div(P + s, Q);
        const Integer h = a * h_prev + h_prev2;
        const Integer k = a * k_prev + k_prev2;
        const Integer t = 2 * h - P0 * k;
        if (t > 0 && t * t - D * k * k == 4)
            return {t, k, D};
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        P = a * Q - P;
        Q = (D - P * P) / Q;
    }
}

std::pair<Integer, BinaryQuadraticForm> primitive_part(const BinaryQuadraticForm& Q)
{
    if (Q.is_zero())
        throw ZeroForm("the zero form has no primitive part");
    const Integer g = Q.content();
    return {g, {Q.a / g, Q.b / g, Q.c / g}};
}

Matrix2 automorph(const BinaryQuadraticForm& Q)
{
    const auto [g, P] = primitive_part(Q);
    const auto pell = pell_fundamental(P.disc());
    const auto& [t, u, D] = pell;
    return {(t - P.b * u) / 2, -P.c * u, P.a * u, (t + P.b * u) / 2};
}

bool is_reduced_indefinite(const BinaryQuadraticForm& Q)
{
    const Integer D = Q.disc();
    if (D <= 0)
        return false;
    const Integer s = isqrt(D);
    const Integer a2 = 2 * abs(Q.a);
    return Q.b >= 1 && Q.b <= s && a2 - Q.b <= s && a2 + Q.b >= s + 1;
}

BinaryQuadraticForm rho(const BinaryQuadraticForm& Q, Matrix2* step)
{
    const Integer D = Q.disc();
    require_indefinite(D);
    const Integer s = isqrt(D);
    const Integer c_abs = abs(Q.c);
    const Integer mod = 2 * c_abs;
    Integer b_new;
    if (c_abs > s)
    {
        b_new = mod_floor(-Q.b, mod);
        if (b_new > c_abs)
            b_new -= mod;
    }
    else
    {
        b_new = s - mod_floor(s + Q.b, mod);
    }
    const Integer t = (b_new + Q.b) / (2 * Q.c);
    const Matrix2 M{0, -1, 1, t};
    if (step)
        *step = M;
    return act(Q, M);
}

BinaryQuadraticForm reduce_indefinite(const BinaryQuadraticForm& Q, Matrix2* transform)
{
    require_indefinite(Q.disc());
    Matrix2 total;
    BinaryQuadraticForm R = Q;
    while (!is_reduced_indefinite(R))
    {
        Matrix2 M;
        R = rho(R, &M);
        total = total * M;
    }
    if (transform)
        *transform = total;
    return R;
}

std::vector<BinaryQuadraticForm> reduction_cycle(const BinaryQuadraticForm& Q)
{
    if (!is_reduced_indefinite(Q))
        throw InvalidArgument(Q.to_string() + " is not a reduced indefinite form");
    std::vector<BinaryQuadraticForm> cycle{Q};
    for (auto next = rho(Q); next != Q; next = rho(next))
        cycle.push_back(next);
    return cycle;
}

bool is_equivalent_indefinite(const BinaryQuadraticForm& Q1, const BinaryQuadraticForm& Q2)
{
    if (Q1.disc() != Q2.disc())
        throw DiscriminantMismatch(Q1.to_string() + " and " + Q2.to_string() + " differ in discriminant");
    const auto [g1, P1] = primitive_part(Q1);
    const auto [g2, P2] = primitive_part(Q2);
    if (g1 != g2)
        return false;
    const auto cycle = reduction_cycle(reduce_indefinite(P1));
    return std::find(cycle.begin(), cycle.end(), reduce_indefinite(P2)) != cycle.end();
}

std::vector<BinaryQuadraticForm> primitive_reduced_indefinite(const Integer& D)
{
    require_indefinite(D);
    const Integer s = isqrt(D);
    std::vector<BinaryQuadraticForm> out;
    for (Integer b = 1; b <= s; ++b)
    {
        if (mod_floor(b - D, 2) != 0)
            continue;
        const Integer numer = b * b - D;
        // s + 1 <= 2|a| + b and 2|a| - b <= s.
        const Integer lo = floor_div(s + 2 - b, 2);
        const Integer hi = floor_div(s + b, 2);
        for (Integer m = std::max(lo, Integer(1)); m <= hi; ++m)
        {
            if (numer % (4 * m) != 0)
                continue;
            for (int sign : {-1, 1})
            {
                const Integer a = sign * m;
                BinaryQuadraticForm Q{a, b, numer / (4 * a)};
                if (Q.content() == 1)
                    out.push_back(Q);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

IndefiniteClassSet indefinite_class_reps(const Integer& D)
{
    require_indefinite(D);
    IndefiniteClassSet result{D, {}};
    for (Integer g = 1; g * g <= D; ++g)
    {
        if (D % (g * g) != 0 || !is_discriminant(D / (g * g)))
            continue;
        const auto reduced = primitive_reduced_indefinite(D / (g * g));
        std::set<BinaryQuadraticForm> seen;
        std::vector<BinaryQuadraticForm> layer;
        for (const auto& Q : reduced)
        {
            if (seen.count(Q))
                continue;
            const auto cycle = reduction_cycle(Q);
            seen.insert(cycle.begin(), cycle.end());
            // Prefer a > 0, then the lexicographically smallest form of the cycle.
            const auto rep = *std::min_element(cycle.begin(), cycle.end(), [](const auto& x, const auto& y) {
                if ((x.a > 0) != (y.a > 0))
                    return x.a > 0;
                return x < y;
            });
            layer.push_back({g * rep.a, g * rep.b, g * rep.c});
        }
        std::sort(layer.begin(), layer.end());
        result.reps.insert(result.reps.end(), layer.begin(), layer.end());
    }
    return result;
}

} // namespace cycletrace

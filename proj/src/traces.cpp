#include "cycletrace/traces.hpp"

#include <algorithm>

#include "cycletrace/errors.hpp"
#include "cycletrace/exactmath.hpp"

namespace cycletrace
{

namespace
{

void require_even_weight(int k)
{
    if (k < 2)
        throw InvalidArgument("weight parameter k must be a positive even integer, got " + std::to_string(k));
    if (k % 2 != 0)
        throw OddWeight("weight parameter k must be even, got " + std::to_string(k));
}

void require_trace_discriminant(const Integer& D)
{
    if (D <= 0 || !is_discriminant(D))
        throw NotADiscriminant("not a positive discriminant: " + D.get_str());
    if (is_perfect_square(D))
        throw SquareDiscriminant("discriminant " + D.get_str() + " is a perfect square");
}

} // namespace

TraceRequest make_trace_request(int k, const BinaryQuadraticForm& A, const Integer& D)
{
    require_even_weight(k);
    require_trace_discriminant(D);
    return {k, reduce_posdef(A), D};
}

CoefficientVector::CoefficientVector(std::initializer_list<std::pair<long, Rational>> entries)
{
    for (const auto& [D, v] : entries)
        set(Integer(D), v);
}

void CoefficientVector::set(const Integer& D, const Rational& value)
{
    if (D <= 0 || !is_discriminant(D))
        throw NotADiscriminant("coefficient index is not a positive discriminant: " + D.get_str());
    if (is_perfect_square(D))
        throw SquareEntry("coefficient at square discriminant " + D.get_str());
    if (value.is_zero())
        entries_.erase(D);
    else
        entries_[D] = value;
}

CoefficientVector CoefficientVector::scaled(const Rational& factor) const
{
    CoefficientVector out;
    for (const auto& [D, v] : entries_)
        out.set(D, v * factor);
    return out;
}

CoefficientVector operator+(const CoefficientVector& x, const CoefficientVector& y)
{
    CoefficientVector out = x;
    for (const auto& [D, v] : y.entries_)
    {
        auto it = out.entries_.find(D);
        out.set(D, it == out.entries_.end() ? v : it->second + v);
    }
    return out;
}

Rational ck(int k, const Integer& D)
{
    require_even_weight(k);
    const auto fac = factor_discriminant(D);
    const auto uk = static_cast<unsigned>(k);
    const Rational D0(fac.D0);
    const Rational f(fac.f);

    const Rational prefactor = -(pow(f, 2 * k - 1) * pow(D0, k - 1) * Rational(binomial(2 * uk, uk)) *
                                 bernoulli_number(uk)) /
                               (pow(Rational(2), k - 2) * Rational(2 * k - 1) * bernoulli_number(2 * uk));

    // sum_{l=1}^{D0} (D0/l) B_k(l/D0)
    Rational character_sum;
    for (Integer l = 1; l <= fac.D0; ++l)
    {
        const int chi = kronecker_symbol(fac.D0, l);
        if (chi != 0)
            character_sum += Rational(chi) * bernoulli_polynomial(uk, Rational(l, fac.D0));
    }

    // sum_{m | f} mu(m) (D0/m) m^{-k} sigma_{1-2k}(f/m)
    Rational conductor_sum;
    const auto fu = fac.f.get_ui();
    for (auto m : divisors(fu))
    {
        const int mu = moebius(m);
        if (mu == 0)
            continue;
        const Integer mz(static_cast<unsigned long>(m));
        const int chi = kronecker_symbol(fac.D0, mz);
        if (chi == 0)
            continue;
        conductor_sum += Rational(mu * chi) * pow(Rational(mz), -k) * divisor_sum_neg(fu / m, uk);
    }
    return prefactor * character_sum * conductor_sum;
}

InteriorScan scan_interior_forms(const Integer& D, const BinaryQuadraticForm& A_in)
{
    require_trace_discriminant(D);
    const BinaryQuadraticForm A = reduce_posdef(A_in);
    const Integer d_abs = -A.disc();
    const Integer s = isqrt(D);
    const Integer aA2 = A.a * A.a;
    const Integer bA_abs = abs(A.b);

    // With x_A = -bA/(2aA) and y_A = sqrt(|d|)/(2aA), a form [a,b,c] with a < 0
    // can contain z_A only if |a| <= sqrt(D)/(2 y_A), i.e. a^2 |d| <= D aA^2, and
    // |b - 2|a| x_A| <= sqrt(D). Candidates are taken from the symmetric window
    // |b| <= 2|a| |x_A| + sqrt(D), which contains that interval; the q_num sign
    // test decides membership.
    InteriorScan scan;
    for (Integer alpha = 1; alpha * alpha * d_abs <= D * aA2; ++alpha)
    {
        const Integer b_max = (alpha * bA_abs) / A.a + s + 1;
        for (Integer b = -b_max; b <= b_max; ++b)
        {
            const Integer excess = abs(b) * A.a - alpha * bA_abs;
            if (excess > 0 && excess * excess > D * aA2)
                continue;
            const Integer numer = D - b * b;
            if (numer % (4 * alpha) != 0)
                continue;
            const BinaryQuadraticForm Q{-alpha, b, numer / (4 * alpha)};
            scan.candidates.push_back(Q);
            const Integer q = inner_product_qnum(Q, A);
            if (q == 0)
                throw GeodesicCollision(D.get_str(), Q.to_string(),
                                        "CM point of " + A.to_string() + " lies on the geodesic of " + Q.to_string() +
                                            " (D = " + D.get_str() + ")");
            if (q > 0)
                scan.interior.push_back({Q, q});
        }
    }
    return scan;
}

std::vector<InteriorForm> enumerate_interior_forms(const Integer& D, const BinaryQuadraticForm& A)
{
    return scan_interior_forms(D, A).interior;
}

Rational legendre_term(int k, const Integer& D, const Integer& q_num, const Integer& d)
{
    require_even_weight(k);
    const auto P = legendre_coeffs(static_cast<unsigned>(k - 1));
    const Rational Dq(D);
    const Rational d_abs(abs(d));
    const Rational q(q_num);
    Rational acc;
    for (int j = 0; 2 * j + 1 <= k - 1; ++j)
    {
        const Rational& p = P.coeffs[static_cast<std::size_t>(2 * j + 1)];
        if (p.is_zero())
            continue;
        const int sign = ((k / 2 + j) % 2 == 0) ? 1 : -1;
        acc += Rational(sign) * p * pow(Dq, (k - 2 - 2 * j) / 2) * pow(q, 2 * j + 1) * pow(d_abs, -j);
    }
    return Rational(4) * acc;
}

namespace
{

Rational assemble(int k, const BinaryQuadraticForm& A, const Rational& ckD, const std::vector<InteriorForm>& forms,
                  int stabilizer)
{
    const Integer d = A.disc();
    // sqrt(|d|) c_k(D) / y_A^(k-1) = c_k(D) (2 aA)^(k-1) |d|^(1 - k/2)
    Rational total = ckD * pow(Rational(2 * A.a), k - 1) * pow(Rational(abs(d)), 1 - k / 2);
    for (const auto& f : forms)
        total += legendre_term(k, f.form.disc(), f.q_num, d);
    return total / Rational(stabilizer);
}

} // namespace

TraceResult trace_formula(const TraceRequest& req)
{
    const auto valid = make_trace_request(req.k, req.A, req.D);
    TraceResult result;
    result.request = valid;
    result.ck = ck(valid.k, valid.D);
    result.interior_forms = enumerate_interior_forms(valid.D, valid.A);
    result.stabilizer = stabilizer_order(valid.A);
    result.value = assemble(valid.k, valid.A, result.ck, result.interior_forms, result.stabilizer);
    return result;
}

TraceResult trace_exact(const TraceRequest& req)
{
    if (!single_trace_weight(req.k))
    {
        require_even_weight(req.k);
        throw UnsupportedWeight("single-discriminant traces need k in {2, 4}, got k = " + std::to_string(req.k));
    }
    return trace_formula(req);
}

Rational reconstruct_value(const TraceResult& r)
{
    return assemble(r.request.k, r.request.A, r.ck, r.interior_forms, r.stabilizer);
}

Rational combined_trace(int k, const BinaryQuadraticForm& A, const CoefficientVector& coeffs)
{
    require_even_weight(k);
    Rational total;
    for (const auto& [D, a] : coeffs.entries())
        total += a * trace_formula(make_trace_request(k, A, D)).value;
    return total;
}

} // namespace cycletrace

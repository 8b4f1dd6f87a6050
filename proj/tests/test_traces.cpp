#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "cycletrace/errors.hpp"
#include "cycletrace/exactmath.hpp"
#include "cycletrace/oracle.hpp"
#include "cycletrace/quadforms.hpp"
#include "cycletrace/traces.hpp"

using namespace cycletrace;

namespace
{

bool valid_nonsquare(long D)
{
    return D > 0 && (D % 4 == 0 || D % 4 == 1) && !is_perfect_square(Integer(D));
}

Rational frac(long p, long q) { return Rational(Integer(p), Integer(q)); }

// Interior forms of discriminant D for A by scanning a box of coefficients.
std::set<BinaryQuadraticForm> brute_interior(long D, const BinaryQuadraticForm& A, long box)
{
    std::set<BinaryQuadraticForm> out;
    for (long a = -box; a < 0; ++a)
        for (long b = -box; b <= box; ++b)
        {
            if ((b * b - D) % (4 * a) != 0)
                continue;
            const auto Q = make_form(a, b, (b * b - D) / (4 * a));
            if (inner_product_qnum(Q, A) > 0)
                out.insert(Q);
        }
    return out;
}

std::set<BinaryQuadraticForm> as_set(const std::vector<InteriorForm>& v)
{
    std::set<BinaryQuadraticForm> out;
    for (const auto& f : v)
        out.insert(f.form);
    return out;
}

const std::vector<BinaryQuadraticForm> kForms = {make_form(1, 1, 1), make_form(1, 0, 1), make_form(1, 1, 2),
                                                 make_form(1, 0, 2), make_form(1, 1, 3)};

} // namespace

TEST_CASE("trace requests")
{
    const auto req = make_trace_request(2, make_form(3, -1, 1), Integer(5));
    CHECK(req.A == make_form(1, 1, 3));
    CHECK(req.d() == -11);
    CHECK_THROWS_AS(make_trace_request(3, make_form(1, 1, 1), Integer(5)), OddWeight);
    CHECK_THROWS_AS(make_trace_request(0, make_form(1, 1, 1), Integer(5)), InvalidArgument);
    CHECK_THROWS_AS(make_trace_request(2, make_form(1, 1, 1), Integer(9)), SquareDiscriminant);
    CHECK_THROWS_AS(make_trace_request(2, make_form(1, 1, 1), Integer(7)), NotADiscriminant);
    CHECK_THROWS_AS(make_trace_request(2, make_form(1, 1, -1), Integer(5)), NotPositiveDefinite);
}

TEST_CASE("c_k(D)")
{
    CHECK(ck(2, Integer(5)) == Rational(8));
    CHECK(ck(4, Integer(5)) == Rational(20));
    CHECK_THROWS_AS(ck(3, Integer(5)), OddWeight);
    CHECK_THROWS_AS(ck(2, Integer(7)), NotADiscriminant);

    SUBCASE("D = 20 goes through the conductor sum")
    {
        const auto fd = factor_discriminant(Integer(20));
        CHECK(fd.D0 == 5);
        CHECK(fd.f == 2);
        const double exact = ck(2, Integer(20)).to_double();
        CHECK(exact == doctest::Approx(ck_numeric(2, Integer(20), 200000)).epsilon(1e-8));
    }

    SUBCASE("agrees with the L-series definition, D <= 50")
    {
        for (int k : {2, 4})
            for (long D = 5; D <= 50; ++D)
            {
                if (!valid_nonsquare(D))
                    continue;
                INFO("k = " << k << ", D = " << D);
                CHECK(ck(k, Integer(D)).to_double() ==
                      doctest::Approx(ck_numeric(k, Integer(D), 200000)).epsilon(1e-8));
            }
    }
}

TEST_CASE("interior forms")
{
    const auto scan = scan_interior_forms(Integer(5), make_form(1, 1, 1));
    const std::set<BinaryQuadraticForm> cands(scan.candidates.begin(), scan.candidates.end());
    CHECK(cands.count(make_form(-1, -1, 1)) == 1);
    CHECK(cands.count(make_form(-1, 1, 1)) == 1);
    CHECK(scan.interior == std::vector<InteriorForm>{{make_form(-1, -1, 1), Integer(1)}});
    CHECK(enumerate_interior_forms(Integer(5), make_form(1, 1, 1)) == scan.interior);

    SUBCASE("collisions name the offending form")
    {
        try
        {
            enumerate_interior_forms(Integer(12), make_form(1, 1, 1));
            FAIL("expected GeodesicCollision");
        }
        catch (const GeodesicCollision& e)
        {
            CHECK(e.discriminant() == "12");
            CHECK(e.form() == "[-1,-4,-1]");
        }
        CHECK_THROWS_AS(enumerate_interior_forms(Integer(28), make_form(1, 1, 1)), GeodesicCollision);
    }

    SUBCASE("[1,0,1] at D = 5 collides with [-1,-1,1]")
    {
        CHECK(inner_product_qnum(make_form(-1, -1, 1), make_form(1, 0, 1)) == 0);
        CHECK_THROWS_AS(enumerate_interior_forms(Integer(5), make_form(1, 0, 1)), GeodesicCollision);
    }

    SUBCASE("[1,0,1] matches a coefficient box scan")
    {
        for (long D : {12, 21, 24})  // not of the form b^2 + 4a^2, so i avoids every geodesic
        {
            const auto found = enumerate_interior_forms(Integer(D), make_form(1, 0, 1));
            for (const auto& f : found)
            {
                CHECK(f.q_num > 0);
                CHECK(f.form.a < 0);
                CHECK(f.q_num == 2 * f.form.a + 2 * f.form.c);
            }
            CHECK(as_set(found) == brute_interior(D, make_form(1, 0, 1), 10));
        }
    }

    SUBCASE("no interior form escapes the enumeration, D <= 50")
    {
        for (const auto& A : kForms)
            for (long D = 5; D <= 50; ++D)
            {
                if (!valid_nonsquare(D))
                    continue;
                std::vector<InteriorForm> found;
                try
                {
                    found = enumerate_interior_forms(Integer(D), A);
                }
                catch (const GeodesicCollision&)
                {
                    continue;
                }
                const long box = static_cast<long>(std::ceil(3 * std::sqrt(static_cast<double>(D))));
                INFO("A = " << A.to_string() << ", D = " << D);
                CHECK(as_set(found) == brute_interior(D, A, box));
            }
    }
}

TEST_CASE("Legendre terms")
{
    CHECK(legendre_term(2, Integer(5), Integer(1), Integer(-3)) == Rational(-4));
    CHECK(legendre_term(4, Integer(5), Integer(1), Integer(-3)) == frac(-100, 3));
    for (int k : {2, 4, 6, 8})
        CHECK(legendre_term(k, Integer(13), Integer(0), Integer(-7)).is_zero());
    CHECK_THROWS_AS(legendre_term(3, Integer(5), Integer(1), Integer(-3)), OddWeight);

    SUBCASE("k = 6 against a floating evaluation of the Legendre polynomial")
    {
        // P_5(x) = (63 x^5 - 70 x^3 + 15 x) / 8; evaluate sqrt|d| 4 (i sqrt D)^5 P_5(i q/(sqrt|d| sqrt D)).
        const double D = 17, q = 3, dabs = 7;
        const std::complex<double> I(0, 1);
        const auto x = I * q / (std::sqrt(dabs) * std::sqrt(D));
        const auto P5 = (63.0 * std::pow(x, 5) - 70.0 * std::pow(x, 3) + 15.0 * x) / 8.0;
        const auto v = std::sqrt(dabs) * 4.0 * std::pow(I * std::sqrt(D), 5) * P5;
        CHECK(std::abs(v.imag()) < 1e-9);
        CHECK(legendre_term(6, Integer(17), Integer(3), Integer(-7)).to_double() == doctest::Approx(v.real()));
    }
}

TEST_CASE("single-D traces")
{
    auto value = [](int k, long D) {
        return trace_exact(make_trace_request(k, make_form(1, 1, 1), Integer(D))).value;
    };
    CHECK(value(2, 5) == Rational(4));
    CHECK(value(2, 33) == Rational(64));
    CHECK(value(4, 41) == frac(2612, 3));
    CHECK_THROWS_AS(value(2, 12), GeodesicCollision);
    CHECK_THROWS_AS(trace_exact(make_trace_request(6, make_form(1, 1, 1), Integer(5))), UnsupportedWeight);

    const auto r = trace_exact(make_trace_request(2, make_form(1, 1, 1), Integer(5)));
    CHECK(r.ck == Rational(8));
    CHECK(r.stabilizer == 3);
    CHECK(r.interior_forms.size() == 1);
}

TEST_CASE("trace properties over D <= 100")
{
    int checked = 0;
    for (const auto& A : kForms)
        for (int k : {2, 4})
            for (long D = 5; D <= 100; ++D)
            {
                if (!valid_nonsquare(D))
                    continue;
                TraceResult r;
                try
                {
                    r = trace_exact(make_trace_request(k, A, Integer(D)));
                }
                catch (const GeodesicCollision&)
                {
                    continue;
                }
                ++checked;
                INFO("k = " << k << ", A = " << A.to_string() << ", D = " << D);

                CHECK(reconstruct_value(r) == r.value);
                CHECK(trace_formula(r.request).value == r.value);

                // Closed forms for k = 2 and k = 4 after y_A = sqrt|d|/(2a), Q_z = q/sqrt|d|.
                const Rational a(A.a), dabs(abs(A.disc())), Dq(D);
                Rational closed;
                if (k == 2)
                {
                    closed = r.ck * Rational(2) * a;
                    for (const auto& f : r.interior_forms)
                        closed -= Rational(4) * Rational(f.q_num);
                }
                else
                {
                    closed = r.ck * Rational(8) * a * a * a / dabs;
                    for (const auto& f : r.interior_forms)
                    {
                        const Rational q(f.q_num);
                        closed -= Rational(2) * (Rational(5) * q * q * q / dabs + Rational(3) * Dq * q);
                    }
                }
                closed /= Rational(stabilizer_order(A));
                CHECK(closed == r.value);

                // |stab| |d|^(k/2-1) trace is an even integer.
                const Rational scaled = Rational(r.stabilizer) * pow(dabs, k / 2 - 1) * r.value;
                CHECK(scaled.is_integer());
                CHECK(mpz_even_p(scaled.numerator().get_mpz_t()));
            }
    CHECK(checked > 250);
}

TEST_CASE("coefficient vectors and combined traces")
{
    const auto A = make_form(1, 1, 1);
    CHECK(combined_trace(2, A, CoefficientVector{{5, Rational(1)}}) == Rational(4));
    CHECK(combined_trace(2, A, CoefficientVector{}) == Rational(0));
    CHECK(combined_trace(2, A, CoefficientVector{{5, Rational(3)}, {8, Rational(-1)}}) == Rational(4));
    CHECK_THROWS_AS(CoefficientVector({{9, Rational(1)}}), SquareEntry);
    CHECK_THROWS_AS(combined_trace(2, A, CoefficientVector{{12, Rational(1)}}), GeodesicCollision);

    CoefficientVector zeroed{{5, Rational(1)}};
    zeroed.set(Integer(5), Rational(0));
    CHECK(zeroed.empty());

    SUBCASE("linear in the coefficient vector")
    {
        std::mt19937 rng(23);
        std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
        const std::vector<long> Ds = {5, 8, 13, 17, 20, 21, 24};
        for (int k : {2, 4, 6})
            for (int trial = 0; trial < 10; ++trial)
            {
                CoefficientVector c1, c2;
                for (long D : Ds)
                {
                    c1.set(Integer(D), frac(num(rng), den(rng)));
                    c2.set(Integer(D), frac(num(rng), den(rng)));
                }
                const Rational alpha = frac(num(rng), den(rng)), beta = frac(num(rng), den(rng));
                const auto lhs = combined_trace(k, A, c1.scaled(alpha) + c2.scaled(beta));
                CHECK(lhs == alpha * combined_trace(k, A, c1) + beta * combined_trace(k, A, c2));
            }
    }

    SUBCASE("single entries reduce to trace_exact")
    {
        for (long D : {5, 8, 13, 33, 41})
            for (int k : {2, 4})
                CHECK(combined_trace(k, A, CoefficientVector{{D, Rational(1)}}) ==
                      trace_exact(make_trace_request(k, A, Integer(D))).value);
    }
}

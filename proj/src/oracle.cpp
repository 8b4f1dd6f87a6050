#include "cycletrace/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "cycletrace/errors.hpp"
#include "cycletrace/exactmath.hpp"
#include "cycletrace/parallel.hpp"
#include "cycletrace/traces.hpp"

namespace cycletrace
{

namespace
{

using Form64 = std::array<std::int64_t, 3>;

std::int64_t to_i64(const Integer& n)
{
    if (!n.fits_slong_p())
        throw InvalidArgument("coefficient " + n.get_str() + " too large for the numerical oracle");
    return n.get_si();
}

std::int64_t floor_div(std::int64_t x, std::int64_t y)
{
    std::int64_t q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0)))
        --q;
    return q;
}

std::int64_t ceil_div(std::int64_t x, std::int64_t y) { return -floor_div(-x, y); }

// Extended Euclid: returns (g, x, y) with x*a + y*b = g >= 0.
std::array<std::int64_t, 3> ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0)
    {
        const std::int64_t q = floor_div(a, b);
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    if (a < 0)
        return {-a, -x0, -y0};
    return {a, x0, y0};
}

std::vector<Form64> enumerate_class(const BinaryQuadraticForm& A_in, long bound)
{
    const auto A = reduce_posdef(A_in);
    const std::int64_t aA = to_i64(A.a), bA = to_i64(A.b), cA = to_i64(A.c);
    const std::int64_t d = bA * bA - 4 * aA * cA;
    const std::int64_t B = bound;
    auto value = [&](std::int64_t x, std::int64_t y) { return aA * x * x + bA * x * y + cA * y * y; };

    // Forms A o M with first column (alpha, gamma) primitive, up to M -> -M;
    // the second column runs over (beta + n alpha, delta + n gamma).
    std::set<Form64> found;
    const auto gamma_max = static_cast<std::int64_t>(std::sqrt(4.0 * aA * B / -d)) + 1;
    for (std::int64_t gamma = 0; gamma <= gamma_max; ++gamma)
    {
        const double disc = 4.0 * aA * B + static_cast<double>(d) * gamma * gamma;
        if (disc < 0)
            continue;
        const double root = std::sqrt(disc);
        const auto lo = static_cast<std::int64_t>(std::floor((-bA * gamma - root) / (2.0 * aA))) - 1;
        const auto hi = static_cast<std::int64_t>(std::ceil((-bA * gamma + root) / (2.0 * aA))) + 1;
        for (std::int64_t alpha = lo; alpha <= hi; ++alpha)
        {
            if (gamma == 0 && alpha != 1)
                continue;
            const auto [g, x, y] = ext_gcd(alpha, gamma);
            if (g != 1)
                continue;
            const std::int64_t a = value(alpha, gamma);
            if (a > B)
                continue;
            // alpha*delta - beta*gamma = 1
            const std::int64_t delta = x, beta = -y;
            const std::int64_t b0 =
                2 * aA * alpha * beta + bA * (alpha * delta + beta * gamma) + 2 * cA * gamma * delta;
            const std::int64_t step = 2 * a;
            for (std::int64_t n = ceil_div(-B - b0, step); n <= floor_div(B - b0, step); ++n)
            {
                const std::int64_t b = b0 + n * step;
                const std::int64_t c = (b * b - d) / (4 * a);
                if (c <= B)
                    found.insert({a, b, c});
            }
        }
    }
    return {found.begin(), found.end()};
}

struct GaussRule
{
    std::array<double, kGaussNodes> nodes{};
    std::array<double, kGaussNodes> weights{};
};

const GaussRule& gauss_rule()
{
    static const GaussRule rule = [] {
        GaussRule r;
        const int n = kGaussNodes;
        for (int i = 0; i < n; ++i)
        {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1, p1 = x;
                for (int j = 2; j <= n; ++j)
                {
                    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            r.nodes[static_cast<std::size_t>(i)] = x;
            r.weights[static_cast<std::size_t>(i)] = 2 / ((1 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

// Composite Gauss-Legendre of fn over [lo, hi]; also returns the integral of |fn|.
template <class Fn>
std::pair<Complex, double> integrate(Fn&& fn, double lo, double hi, int panels)
{
    const auto& rule = gauss_rule();
    const double width = (hi - lo) / panels;
    Complex total = 0;
    double l1 = 0;
    for (int p = 0; p < panels; ++p)
    {
        const double mid = lo + (p + 0.5) * width;
        for (int i = 0; i < kGaussNodes; ++i)
        {
            const Complex v = fn(mid + 0.5 * width * rule.nodes[static_cast<std::size_t>(i)]);
            const double w = 0.5 * width * rule.weights[static_cast<std::size_t>(i)];
            total += w * v;
            l1 += w * std::abs(v);
        }
    }
    return {total, l1};
}

double log_of(const Integer& n)
{
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

} // namespace

void QuadratureConfig::validate() const
{
    if (!(rel_tol > 0))
        throw InvalidArgument("rel_tol must be positive");
    if (initial_panels < 1 || max_panels < initial_panels)
        throw InvalidArgument("panel limits must be positive with max >= initial");
    if (orbit_bound < 1 || max_orbit_bound < orbit_bound)
        throw InvalidArgument("orbit bounds must be positive with max >= initial");
}

ClassOrbit::ClassOrbit(int k, const BinaryQuadraticForm& A, long bound)
    : k_(k), bound_(bound), forms_(enumerate_class(A, bound))
{
    if (k < 2 || k % 2 != 0)
        throw OddWeight("weight parameter k must be even and >= 2");
    const double d_abs = -reduce_posdef(A).disc().get_d();
    scale_ = std::pow(d_abs, (k + 1) / 2.0) / std::numbers::pi;
}

Complex ClassOrbit::operator()(Complex z) const
{
    if (!(z.imag() > 0))
        throw InvalidArgument("evaluation point must lie in the upper half-plane");
    const Complex z2 = z * z;
    Complex acc = 0;
    for (const auto& [a, b, c] : forms_)
    {
        const Complex v = static_cast<double>(a) * z2 + static_cast<double>(b) * z + static_cast<double>(c);
        if (std::abs(v) < 1e-10)
            throw PoleProximity("evaluation point is within 1e-10 of a pole");
        Complex p = v;
        for (int j = 1; j < k_; ++j)
            p *= v;
        acc += 1.0 / p;
    }
    return scale_ * acc;
}

Complex ClassOrbit::eval_reduced(Complex z) const
{
    // w = g z with g = [[p, q], [r, s]] in SL2(Z) and w in the fundamental domain.
    double p = 1, q = 0, r = 0, s = 1;
    Complex w = z;
    for (int it = 0; it < 100000; ++it)
    {
        const double n = std::round(w.real());
        w -= n;
        p -= n * r;
        q -= n * s;
        if (std::norm(w) >= 1)
            break;
        w = -1.0 / w;
        std::tie(p, q, r, s) = std::make_tuple(-r, -s, p, q);
    }
    // f(g z) = (r z + s)^{2k} f(z)
    Complex j = r * z + s;
    Complex jk = 1;
    for (int i = 0; i < 2 * k_; ++i)
        jk *= j;
    return (*this)(w) / jk;
}

std::vector<BinaryQuadraticForm> class_forms(const BinaryQuadraticForm& A, long bound)
{
    std::vector<BinaryQuadraticForm> out;
    for (const auto& [a, b, c] : enumerate_class(A, bound))
        out.push_back(make_form(a, b, c));
    return out;
}

Complex eval_f_kA(int k, const BinaryQuadraticForm& A, Complex z, long bound)
{
    return ClassOrbit(k, A, bound)(z);
}

Complex GeodesicChart::point(double u) const
{
    const double sech = 1 / std::cosh(u);
    return {center - signed_radius * std::tanh(u), std::abs(signed_radius) * sech};
}

Complex GeodesicChart::tangent(double u) const
{
    const double sech = 1 / std::cosh(u);
    const double th = std::tanh(u);
    return {-signed_radius * sech * sech, -std::abs(signed_radius) * sech * th};
}

GeodesicChart geodesic_chart(const BinaryQuadraticForm& Q)
{
    const Integer D = Q.disc();
    const auto pell = pell_fundamental(primitive_part(Q).second.disc());
    const double a = Q.a.get_d();
    const double b = Q.b.get_d();
    // log eps = log t + log((1 + (u/t) sqrt(D')) / 2)
    const double ratio = std::exp(log_of(pell.u) - log_of(pell.t)) * std::sqrt(pell.D.get_d());
    const double log_eps = log_of(pell.t) + std::log((1 + ratio) / 2);
    // Start point (-b + sqrt(D))/(2a): the right end for a > 0 (counterclockwise),
    // the left end for a < 0.
    return {-b / (2 * a), std::sqrt(D.get_d()) / (2 * a), 2 * log_eps};
}

ClassIntegral cycle_integral_numeric(int k, const BinaryQuadraticForm& A, const BinaryQuadraticForm& Q,
                                     const QuadratureConfig& cfg, double base)
{
    cfg.validate();
    const Integer D = Q.disc();
    // Poles of f_{k,A} on C_Q are exactly forms of disc D through z_A.
    scan_interior_forms(D, A);

    const auto chart = geodesic_chart(Q);
    const double qa = Q.a.get_d(), qb = Q.b.get_d(), qc = Q.c.get_d();
    const double lo = base, hi = base + chart.period;

    ClassIntegral result{Q, 0, 0, 0, 0};
    std::vector<Complex> history;
    int panels = cfg.initial_panels;
    for (long bound = cfg.orbit_bound;; bound *= 2)
    {
        const ClassOrbit orbit(k, A, bound);
        auto integrand = [&](double u) {
            const Complex z = chart.point(u);
            const Complex qz = (qa * z + qb) * z + qc;
            return orbit.eval_reduced(z) * std::pow(qz, k - 1) * chart.tangent(u);
        };
        auto [prev, l1] = integrate(integrand, lo, hi, panels);
        double panel_err = 0;
        for (;;)
        {
            if (2 * panels > cfg.max_panels)
                throw NoConvergence("panel limit reached for " + Q.to_string());
            const auto [next, next_l1] = integrate(integrand, lo, hi, 2 * panels);
            panel_err = std::abs(next - prev);
            const double scale = std::max(std::abs(next), 1e-3 * next_l1);
            prev = next;
            l1 = next_l1;
            if (panel_err <= cfg.rel_tol * scale)
                break;
            panels *= 2;
        }
        history.push_back(prev);
        const double scale = std::max(std::abs(prev), 1e-3 * l1);
        const std::size_t h = history.size();
        if (h >= 3)
        {
            const double d1 = std::abs(history[h - 1] - history[h - 2]);
            const double d2 = std::abs(history[h - 2] - history[h - 3]);
            if (d1 <= cfg.rel_tol * scale && d2 <= cfg.rel_tol * scale)
            {
                result.value = prev;
                result.est_error = std::max(d1, panel_err);
                result.orbit_bound = bound;
                result.panels = 2 * panels;
                return result;
            }
        }
        if (2 * bound > cfg.max_orbit_bound)
            throw NoConvergence("orbit bound limit reached for " + Q.to_string());
    }
}

NumericTrace trace_numeric(int k, const BinaryQuadraticForm& A, const Integer& D, const QuadratureConfig& cfg)
{
    if (!single_trace_weight(k))
        throw UnsupportedWeight("numeric traces need k in {2, 4}, got k = " + std::to_string(k));
    const auto req = make_trace_request(k, A, D);
    scan_interior_forms(req.D, req.A);
    const auto classes = indefinite_class_reps(req.D);

    std::vector<std::exception_ptr> errors;
    auto per_class = parallel_map<ClassIntegral>(
        classes.reps.size(), [&](std::size_t i) { return cycle_integral_numeric(k, req.A, classes.reps[i], cfg); },
        errors);
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    NumericTrace out{k, req.A, req.D, 0, std::move(per_class), 0};
    Complex total = 0;
    for (const auto& c : out.per_class)
    {
        total += c.value;
        out.est_error += c.est_error;
    }
    out.value = total.real();
    return out;
}

double ck_numeric(int k, const Integer& D, long n_terms)
{
    if (k < 2 || k % 2 != 0)
        throw OddWeight("weight parameter k must be even and >= 2");
    if (n_terms < 100)
        throw InvalidArgument("ck_numeric needs at least 100 terms");
    const auto fac = factor_discriminant(D);
    const long D0 = fac.D0.get_si();

    // Smallest terms first.
    double L = 0;
    for (long n = n_terms; n >= 1; --n)
    {
        const int chi = kronecker_symbol(static_cast<std::int64_t>(D0), static_cast<std::int64_t>(n));
        if (chi != 0)
            L += chi * std::pow(static_cast<double>(n), -k);
    }

    Rational conductor_sum;
    const auto fu = fac.f.get_ui();
    for (auto m : divisors(fu))
    {
        const int mu = moebius(m);
        const Integer mz(static_cast<unsigned long>(m));
        const int chi = kronecker_symbol(fac.D0, mz);
        if (mu != 0 && chi != 0)
            conductor_sum += Rational(mu * chi) * pow(Rational(mz), -k) * divisor_sum_neg(fu / m, static_cast<unsigned>(k));
    }

    const double kd = k;
    const double prefactor = std::pow(D.get_d(), kd - 0.5) * std::riemann_zeta(kd) /
                             (std::pow(2.0, kd - 3) * (2 * kd - 1) * std::riemann_zeta(2 * kd));
    return prefactor * L * conductor_sum.to_double();
}

CompareReport compare(const Rational& exact, double numeric, double rel_tol)
{
    CompareReport r;
    const double e = exact.to_double();
    r.abs_diff = std::abs(numeric - e);
    if (exact.is_zero())
    {
        r.rel_diff = r.abs_diff;
        r.pass = r.abs_diff < rel_tol;
    }
    else
    {
        r.rel_diff = r.abs_diff / std::abs(e);
        r.pass = r.rel_diff < rel_tol;
    }
    return r;
}

} // namespace cycletrace

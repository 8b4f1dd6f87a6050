#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "cycletrace/quadforms.hpp"
#include "cycletrace/rational.hpp"

namespace cycletrace
{

using Complex = std::complex<double>;

/// Tolerances and truncation limits of the numerical oracle.
struct QuadratureConfig
{
    double rel_tol = 1e-5;
    int initial_panels = 4;
    int max_panels = 4096;
    long orbit_bound = 400;
    long max_orbit_bound = 102400;

    void validate() const;
};

/// Gauss-Legendre nodes per panel.
inline constexpr int kGaussNodes = 32;

/// Forms of the class A with max(|a|, |b|, |c|) <= bound, kept in sorted order
/// in double precision for fast evaluation of the orbit sum.
class ClassOrbit
{
public:
    ClassOrbit(int k, const BinaryQuadraticForm& A, long bound);

    int k() const { return k_; }
    long bound() const { return bound_; }
    std::size_t size() const { return forms_.size(); }
    const std::vector<std::array<std::int64_t, 3>>& forms() const { return forms_; }

    /// Truncated orbit sum (|d|^((k+1)/2) / pi) sum_Q Q(z,1)^(-k).
    Complex operator()(Complex z) const;

    /// Same function, evaluated after moving z into the standard fundamental
    /// domain and applying the weight-2k transformation law.
    Complex eval_reduced(Complex z) const;

private:
    int k_;
    long bound_;
    double scale_;
    std::vector<std::array<std::int64_t, 3>> forms_;
};

/// Forms of the class of A with all coefficients bounded by `bound`, sorted.
std::vector<BinaryQuadraticForm> class_forms(const BinaryQuadraticForm& A, long bound);

Complex eval_f_kA(int k, const BinaryQuadraticForm& A, Complex z, long bound);

struct ClassIntegral
{
    BinaryQuadraticForm rep;
    Complex value;
    double est_error = 0;
    long orbit_bound = 0;
    int panels = 0;
};

struct NumericTrace
{
    int k = 2;
    BinaryQuadraticForm A;
    Integer D;
    double value = 0;
    std::vector<ClassIntegral> per_class;
    double est_error = 0;
};

/// Point on C_Q in hyperbolic arclength coordinate u: the closed cycle is any
/// interval of length 2 log(eps) where eps = (t + u sqrt(D'))/2 is the Pell unit.
struct GeodesicChart
{
    double center;
    double signed_radius;   // sqrt(D)/(2a): start point is center + signed_radius
    double period;          // 2 log eps

    Complex point(double u) const;
    Complex tangent(double u) const;
};

GeodesicChart geodesic_chart(const BinaryQuadraticForm& Q);

/// Cycle integral of f_{k,A}(z) Q(z,1)^(k-1) dz over one period of the closed
/// geodesic, starting at arclength `base` (t = e^base in the dilation coordinate).
ClassIntegral cycle_integral_numeric(int k, const BinaryQuadraticForm& A, const BinaryQuadraticForm& Q,
                                     const QuadratureConfig& cfg, double base = 0.0);

NumericTrace trace_numeric(int k, const BinaryQuadraticForm& A, const Integer& D, const QuadratureConfig& cfg);

/// c_k(D) from its L-series definition, with L_{D0}(k) truncated at n_terms.
double ck_numeric(int k, const Integer& D, long n_terms);

struct CompareReport
{
    bool pass = false;
    double abs_diff = 0;
    double rel_diff = 0;
};

/// Relative comparison; falls back to the absolute difference when exact = 0.
CompareReport compare(const Rational& exact, double numeric, double rel_tol);

} // namespace cycletrace

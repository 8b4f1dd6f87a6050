#pragma once

#include <map>
#include <vector>

#include "cycletrace/quadforms.hpp"
#include "cycletrace/rational.hpp"

namespace cycletrace
{

/// Weight parameter k (modular weight 2k), class A of discriminant d < 0 and
/// D > 0 nonsquare. `make_trace_request` validates and reduces A.
struct TraceRequest
{
    int k = 2;
    BinaryQuadraticForm A;
    Integer D;

    Integer d() const { return A.disc(); }
};

TraceRequest make_trace_request(int k, const BinaryQuadraticForm& A, const Integer& D);

/// A form Q of discriminant D with Q_{z_A} > 0 > a, and its q_num.
struct InteriorForm
{
    BinaryQuadraticForm form;
    Integer q_num;

    friend bool operator==(const InteriorForm&, const InteriorForm&) = default;
};

/// Result of the finite scan around z_A: every candidate form that passed the
/// coefficient bounds, and the subset with z_A inside its geodesic.
struct InteriorScan
{
    std::vector<BinaryQuadraticForm> candidates;
    std::vector<InteriorForm> interior;
};

struct TraceResult
{
    TraceRequest request;
    Rational value;
    Rational ck;
    std::vector<InteriorForm> interior_forms;
    int stabilizer = 1;
};

/// Finite map D -> a_F(-D). Square D are rejected with SquareEntry.
class CoefficientVector
{
public:
    CoefficientVector() = default;
    CoefficientVector(std::initializer_list<std::pair<long, Rational>> entries);

    void set(const Integer& D, const Rational& value);
    const std::map<Integer, Rational>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    CoefficientVector scaled(const Rational& factor) const;
    friend CoefficientVector operator+(const CoefficientVector& x, const CoefficientVector& y);

private:
    std::map<Integer, Rational> entries_;
};

/// c_k(D) through its finite Bernoulli expression.
Rational ck(int k, const Integer& D);

InteriorScan scan_interior_forms(const Integer& D, const BinaryQuadraticForm& A);
std::vector<InteriorForm> enumerate_interior_forms(const Integer& D, const BinaryQuadraticForm& A);

/// sqrt(|d|) * 4 (i sqrt(D))^(k-1) P_{k-1}(i q_num / (sqrt(|d|) sqrt(D))), which is rational.
Rational legendre_term(int k, const Integer& D, const Integer& q_num, const Integer& d);

/// Single-discriminant trace for k in {2, 4}.
TraceResult trace_exact(const TraceRequest& req);

/// Right-hand side of the trace formula at one D, for any even k >= 2.
TraceResult trace_formula(const TraceRequest& req);

/// Recomputes the trace value from the stored constant, interior forms and stabilizer.
Rational reconstruct_value(const TraceResult& result);

/// sum_D a_F(-D) * (trace formula at D).
Rational combined_trace(int k, const BinaryQuadraticForm& A, const CoefficientVector& coeffs);

/// Kinds of weights for which a single-D trace is defined without choosing F.
inline bool single_trace_weight(int k) { return k == 2 || k == 4; }

} // namespace cycletrace

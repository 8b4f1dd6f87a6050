#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "cycletrace/rational.hpp"

namespace cycletrace
{

/// Integral binary quadratic form a x^2 + b x y + c y^2.
struct BinaryQuadraticForm
{
    Integer a = 0;
    Integer b = 0;
    Integer c = 0;

    Integer disc() const { return b * b - 4 * a * c; }
    bool is_zero() const { return a == 0 && b == 0 && c == 0; }
    Integer content() const;

    /// "[a,b,c]".
    std::string to_string() const;

    friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
    friend std::strong_ordering operator<=>(const BinaryQuadraticForm& x, const BinaryQuadraticForm& y);
};

BinaryQuadraticForm make_form(long a, long b, long c);

/// 2x2 integer matrix [[p, q], [r, s]].
struct Matrix2
{
    Integer p = 1;
    Integer q = 0;
    Integer r = 0;
    Integer s = 1;

    Integer det() const { return p * s - q * r; }
    friend Matrix2 operator*(const Matrix2& x, const Matrix2& y);
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// (Q o M)(x, y) = Q(p x + q y, r x + s y).
BinaryQuadraticForm act(const BinaryQuadraticForm& Q, const Matrix2& M);

/// CM point z_A = x_A + i y_A with y_A = yA_coeff * sqrt(|d|).
struct CMPoint
{
    Rational xA;
    Rational yA_coeff;
    Integer d;
    BinaryQuadraticForm form;
};

/// Minimal positive solution of t^2 - D u^2 = 4.
struct PellSolution
{
    Integer t;
    Integer u;
    Integer D;
};

struct IndefiniteClassSet
{
    Integer D;
    std::vector<BinaryQuadraticForm> reps;
};

// Definite forms.

BinaryQuadraticForm reduce_posdef(const BinaryQuadraticForm& Q);
bool is_reduced_posdef(const BinaryQuadraticForm& Q);
bool is_equivalent_posdef(const BinaryQuadraticForm& Q1, const BinaryQuadraticForm& Q2);
CMPoint cm_point(const BinaryQuadraticForm& A);

/// Order of the stabilizer of z_Q in PSL2(Z) for primitive forms of
/// discriminant d: 3 for d = -3, 2 for d = -4, 1 otherwise.
int stabilizer_order(const Integer& d);
/// Same, for the CM point of a possibly imprimitive definite form.
int stabilizer_order(const BinaryQuadraticForm& A);

/// Integer q_num with Q_{z_A} = q_num / sqrt(|d|). Also the SL2-invariant
/// pairing 2 a C - b B + 2 c A of Q = [a,b,c] with A = [A,B,C].
Integer inner_product_qnum(const BinaryQuadraticForm& Q, const BinaryQuadraticForm& A);

// Indefinite forms.

PellSolution pell_fundamental(const Integer& D);

/// Generator of the stabilizer of Q in SL2(Z) with eigenvalue (t + u sqrt(D'))/2 > 1,
/// where (t, u) solves the Pell equation for the primitive part's discriminant D'.
Matrix2 automorph(const BinaryQuadraticForm& Q);

/// Q = g * primitive.
std::pair<Integer, BinaryQuadraticForm> primitive_part(const BinaryQuadraticForm& Q);

bool is_reduced_indefinite(const BinaryQuadraticForm& Q);

/// One reduction step Q -> Q o [[0, -1], [1, t]]; maps reduced forms to reduced
/// forms and is a bijection on them. Optionally returns the matrix used.
BinaryQuadraticForm rho(const BinaryQuadraticForm& Q, Matrix2* step = nullptr);

/// Equivalent reduced form, optionally with M such that Q o M is the result.
BinaryQuadraticForm reduce_indefinite(const BinaryQuadraticForm& Q, Matrix2* transform = nullptr);

/// The rho-cycle through the reduced form Q, starting at Q.
std::vector<BinaryQuadraticForm> reduction_cycle(const BinaryQuadraticForm& Q);

bool is_equivalent_indefinite(const BinaryQuadraticForm& Q1, const BinaryQuadraticForm& Q2);

/// One primitive-part-reduced representative per SL2(Z)-class of forms of
/// discriminant D, imprimitive classes included; sorted by content, then by form.
IndefiniteClassSet indefinite_class_reps(const Integer& D);

/// Primitive reduced indefinite forms of discriminant D.
std::vector<BinaryQuadraticForm> primitive_reduced_indefinite(const Integer& D);

Integer isqrt(const Integer& n);

} // namespace cycletrace

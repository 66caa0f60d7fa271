#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace tracenet {

/// Univariate polynomial with exact 64-bit integer coefficients, constant
/// term first. Trailing zeros are never stored, so the zero polynomial has
/// an empty coefficient vector and degree -1. Arithmetic throws
/// std::overflow_error instead of wrapping.
class IntPolynomial {
public:
    using Coefficient = std::int64_t;

    IntPolynomial() = default;
    IntPolynomial(std::initializer_list<Coefficient> coefficients);
    explicit IntPolynomial(std::vector<Coefficient> coefficients);

    static IntPolynomial monomial(Coefficient c, std::size_t degree);

    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] const std::vector<Coefficient>& coefficients() const { return coeffs_; }
    /// Coefficient of z^k; zero past the degree.
    [[nodiscard]] Coefficient operator[](std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : 0;
    }
    [[nodiscard]] double operator()(double z) const;

    IntPolynomial& operator+=(const IntPolynomial& rhs);
    IntPolynomial& operator-=(const IntPolynomial& rhs);
    IntPolynomial& operator*=(const IntPolynomial& rhs);

    friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
    friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
    friend IntPolynomial operator*(IntPolynomial a, const IntPolynomial& b) { return a *= b; }
    friend IntPolynomial operator-(IntPolynomial a);
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    /// Human-readable form, e.g. "1 - 5z + 5z^2".
    [[nodiscard]] std::string to_string(char var = 'z') const;

private:
    void trim();
    std::vector<Coefficient> coeffs_;
};

using PolyMatrix = std::vector<std::vector<IntPolynomial>>;

/// Determinant by fraction-free (Bareiss) elimination over Z[z]. The
/// intermediate arithmetic runs on arbitrary-precision integers; only the
/// result must fit in 64-bit coefficients.
IntPolynomial bareiss_determinant(const PolyMatrix& m);

/// Determinant by cofactor expansion along the first row. Exponential; an
/// independent cross-check for bareiss_determinant on small matrices.
IntPolynomial cofactor_determinant(const PolyMatrix& m);

/// Enclosure of a real root. `lower < root <= upper` unless `exact`, in which
/// case lower == upper == midpoint == root (root is a dyadic rational that
/// was hit during bisection).
struct CertifiedRoot {
    double lower = 0.0;
    double upper = 0.0;
    double midpoint = 0.0;
    bool exact = false;

    [[nodiscard]] double width() const { return upper - lower; }
};

/// Number of distinct real roots of p in (lo, hi], by an exact rational
/// Sturm sequence of the square-free part. Throws std::invalid_argument if
/// p is zero or lo >= hi.
std::size_t count_roots(const IntPolynomial& p, double lo, double hi);

/// Smallest root of p in (lo, hi], isolated with Sturm counts over exact
/// rational endpoints and bisected until the enclosure is at most `tol`
/// wide. Throws NumericFailure when there is no root in range or when `tol`
/// is below the double resolution at hi.
CertifiedRoot smallest_root(const IntPolynomial& p, double lo, double hi, double tol);

} // namespace tracenet

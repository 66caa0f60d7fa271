#include "tracenet/polynomial.hpp"

#include "tracenet/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tracenet {

namespace {

using Coefficient = IntPolynomial::Coefficient;

Coefficient checked_add(Coefficient a, Coefficient b) {
    Coefficient r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("IntPolynomial coefficient overflow");
    return r;
}

Coefficient checked_mul(Coefficient a, Coefficient b) {
    Coefficient r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("IntPolynomial coefficient overflow");
    return r;
}

} // namespace

IntPolynomial::IntPolynomial(std::initializer_list<Coefficient> coefficients) : coeffs_(coefficients) {
    trim();
}

IntPolynomial::IntPolynomial(std::vector<Coefficient> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
}

IntPolynomial IntPolynomial::monomial(Coefficient c, std::size_t degree) {
    std::vector<Coefficient> v(degree + 1, 0);
    v[degree] = c;
    return IntPolynomial(std::move(v));
}

void IntPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

double IntPolynomial::operator()(double z) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + static_cast<double>(*it);
    return acc;
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] = checked_add(coeffs_[i], rhs.coeffs_[i]);
    trim();
    return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& rhs) {
    return *this += -rhs;
}

IntPolynomial& IntPolynomial::operator*=(const IntPolynomial& rhs) {
    if (is_zero() || rhs.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<Coefficient> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            out[i + j] = checked_add(out[i + j], checked_mul(coeffs_[i], rhs.coeffs_[j]));
    coeffs_ = std::move(out);
    trim();
    return *this;
}

IntPolynomial operator-(IntPolynomial a) {
    for (auto& c : a.coeffs_) {
        if (c == std::numeric_limits<Coefficient>::min()) throw std::overflow_error("IntPolynomial coefficient overflow");
        c = -c;
    }
    return a;
}

std::string IntPolynomial::to_string(char var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        auto c = coeffs_[k];
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        auto mag = c < 0 ? -static_cast<unsigned long long>(c) : static_cast<unsigned long long>(c);
        if (mag != 1 || k == 0) os << mag;
        if (k >= 1) os << var;
        if (k >= 2) os << '^' << k;
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Arbitrary-precision helpers

namespace {

using BigPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;

template <class P>
void trim(P& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

BigPoly to_big(const IntPolynomial& p) {
    BigPoly out;
    for (auto c : p.coefficients()) out.emplace_back(static_cast<long>(c));
    return out;
}

BigPoly big_mul(const BigPoly& a, const BigPoly& b) {
    if (a.empty() || b.empty()) return {};
    BigPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

BigPoly big_sub(BigPoly a, const BigPoly& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// Exact division in Z[z]; the caller guarantees divisibility.
BigPoly big_exact_div(BigPoly num, const BigPoly& den) {
    if (den.empty()) throw std::domain_error("division by zero polynomial");
    if (num.empty()) return {};
    if (num.size() < den.size()) throw std::logic_error("Bareiss: inexact polynomial division");
    BigPoly q(num.size() - den.size() + 1, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
        const mpz_class& lead = num[k + den.size() - 1];
        if (lead == 0) continue;
        if (!mpz_divisible_p(lead.get_mpz_t(), den.back().get_mpz_t()))
            throw std::logic_error("Bareiss: inexact polynomial division");
        q[k] = lead / den.back();
        for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= q[k] * den[j];
    }
    trim(num);
    if (!num.empty()) throw std::logic_error("Bareiss: inexact polynomial division");
    trim(q);
    return q;
}

IntPolynomial to_int(const BigPoly& p) {
    std::vector<Coefficient> out;
    for (const auto& c : p) {
        if (!c.fits_slong_p()) throw std::overflow_error("determinant coefficient exceeds 64 bits");
        out.push_back(c.get_si());
    }
    return IntPolynomial(std::move(out));
}

RatPoly to_rat(const IntPolynomial& p) {
    RatPoly out;
    for (auto c : p.coefficients()) out.emplace_back(static_cast<long>(c));
    return out;
}

RatPoly derivative(const RatPoly& p) {
    RatPoly out;
    for (std::size_t k = 1; k < p.size(); ++k) out.push_back(p[k] * static_cast<long>(k));
    trim(out);
    return out;
}

// Remainder of a / b over Q.
RatPoly rat_rem(RatPoly a, const RatPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

RatPoly rat_quot(RatPoly a, const RatPoly& b) {
    if (a.size() < b.size()) return {};
    RatPoly q(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size() && !a.empty()) {
        std::size_t shift = a.size() - b.size();
        mpq_class f = a.back() / b.back();
        q[shift] = f;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return q;
}

RatPoly rat_gcd(RatPoly a, RatPoly b) {
    while (!b.empty()) {
        auto r = rat_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

int sign_at(const RatPoly& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return sgn(acc);
}

class SturmSequence {
public:
    explicit SturmSequence(const IntPolynomial& p) {
        if (p.is_zero()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
        RatPoly f = to_rat(p);
        RatPoly g = rat_gcd(f, derivative(f));
        squarefree_ = g.size() > 1 ? rat_quot(f, g) : f;
        seq_.push_back(squarefree_);
        seq_.push_back(derivative(squarefree_));
        while (seq_.back().size() > 1) {
            RatPoly r = rat_rem(seq_[seq_.size() - 2], seq_.back());
            if (r.empty()) break;
            for (auto& c : r) c = -c;
            seq_.push_back(std::move(r));
        }
        if (seq_.back().empty()) seq_.pop_back();
    }

    [[nodiscard]] int variations(const mpq_class& x) const {
        int count = 0, last = 0;
        for (const auto& q : seq_) {
            int s = sign_at(q, x);
            if (s == 0) continue;
            if (last != 0 && s != last) ++count;
            last = s;
        }
        return count;
    }

    // Distinct roots in (a, b]; a must not be a root.
    [[nodiscard]] int count(const mpq_class& a, const mpq_class& b) const { return variations(a) - variations(b); }

    [[nodiscard]] bool is_root(const mpq_class& x) const { return sign_at(squarefree_, x) == 0; }

private:
    RatPoly squarefree_;
    std::vector<RatPoly> seq_;
};

mpq_class exact(double x) {
    mpq_class q(x);
    q.canonicalize();
    return q;
}

} // namespace

IntPolynomial bareiss_determinant(const PolyMatrix& input) {
    const std::size_t n = input.size();
    for (const auto& row : input)
        if (row.size() != n) throw std::invalid_argument("determinant of a non-square matrix");
    if (n == 0) return IntPolynomial{1};

    std::vector<std::vector<BigPoly>> a(n, std::vector<BigPoly>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = to_big(input[i][j]);

    BigPoly prev{1};
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].empty()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a[swap_row][k].empty()) ++swap_row;
            if (swap_row == n) return IntPolynomial{};
            std::swap(a[k], a[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                BigPoly num = big_sub(big_mul(a[i][j], a[k][k]), big_mul(a[i][k], a[k][j]));
                a[i][j] = big_exact_div(std::move(num), prev);
            }
            a[i][k].clear();
        }
        prev = a[k][k];
    }
    BigPoly det = a[n - 1][n - 1];
    if (negate)
        for (auto& c : det) c = -c;
    return to_int(det);
}

IntPolynomial cofactor_determinant(const PolyMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) return IntPolynomial{1};
    if (n == 1) return m[0][0];
    IntPolynomial det;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        PolyMatrix minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<IntPolynomial> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        auto term = m[0][j] * cofactor_determinant(minor);
        if (j % 2 == 0) {
            det += term;
        } else {
            det -= term;
        }
    }
    return det;
}

std::size_t count_roots(const IntPolynomial& p, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("count_roots: empty interval");
    SturmSequence s(p);
    mpq_class a = exact(lo), b = exact(hi);
    if (s.is_root(a)) throw std::invalid_argument("count_roots: lower endpoint is a root");
    return static_cast<std::size_t>(s.count(a, b));
}

CertifiedRoot smallest_root(const IntPolynomial& p, double lo, double hi, double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw NumericFailure("root tolerance must be positive");
    if (!(lo < hi)) throw NumericFailure("empty root search interval");
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (tol < 2.0 * (std::nextafter(scale, INFINITY) - scale))
        throw NumericFailure("root not isolable at tolerance " + std::to_string(tol));

    SturmSequence s(p);
    mpq_class a = exact(lo), b = exact(hi);
    if (s.is_root(a)) throw NumericFailure("lower endpoint of the root search interval is a root");
    if (s.count(a, b) == 0) throw NumericFailure("no root in (" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

    const mpq_class width_target = exact(tol);
    while (b - a > width_target) {
        mpq_class mid = (a + b) / 2;
        if (s.is_root(mid) && s.count(a, mid) == 1) {
            double m = mid.get_d();
            return {m, m, m, true};
        }
        if (s.count(a, mid) >= 1) {
            b = mid;
        } else {
            a = mid;
        }
    }
    // Round the enclosure outward to doubles.
    double lower = a.get_d();
    if (exact(lower) > a) lower = std::nextafter(lower, -INFINITY);
    double upper = b.get_d();
    if (exact(upper) < b) upper = std::nextafter(upper, INFINITY);
    mpq_class mid = (a + b) / 2;
    return {lower, upper, mid.get_d(), false};
}

} // namespace tracenet

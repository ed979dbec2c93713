#pragma once

// Test-only exact arithmetic and random generators. Nothing here calls into
// the library's arithmetic, so it can serve as an independent oracle.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <random>
#include <vector>

#include "kcert/bigfloat.hpp"
#include "kcert/interval.hpp"

namespace oracle {

inline mpq_class exact(double x)
{
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline mpq_class exact(const kcert::BigFloat& x)
{
    mpz_class m;
    const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
    mpq_class q(m);
    if (e >= 0) {
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return q;
}

struct QComplex {
    mpq_class re{0};
    mpq_class im{0};
};

inline QComplex operator+(const QComplex& a, const QComplex& b)
{
    return {a.re + b.re, a.im + b.im};
}

inline QComplex operator-(const QComplex& a, const QComplex& b)
{
    return {a.re - b.re, a.im - b.im};
}

inline QComplex operator*(const QComplex& a, const QComplex& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline QComplex operator/(const QComplex& a, const QComplex& b)
{
    const mpq_class d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

template <class T>
QComplex exact(const kcert::Complex<T>& z)
{
    return {exact(z.re), exact(z.im)};
}

template <class T>
bool contains(const kcert::RealInterval<T>& x, const mpq_class& q)
{
    return exact(x.lo()) <= q && q <= exact(x.hi());
}

template <class T>
bool contains(const kcert::ComplexInterval<T>& x, const QComplex& q)
{
    return contains(x.re(), q.re) && contains(x.im(), q.im);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Double on a coarse dyadic grid, so that sums and products of a few of
    /// them are exact in binary64.
    double dyadic(int range, int frac_bits = 8)
    {
        const int scale = 1 << frac_bits;
        return static_cast<double>(integer(-range * scale, range * scale)) / scale;
    }

    kcert::RealInterval<double> interval(double lo, double hi)
    {
        double a = uniform(lo, hi);
        double b = uniform(lo, hi);
        if (b < a) {
            std::swap(a, b);
        }
        return {a, b};
    }

    kcert::ComplexInterval<double> cinterval(double lo, double hi) { return {interval(lo, hi), interval(lo, hi)}; }

    double sample(const kcert::RealInterval<double>& x) { return uniform(0.0, 1.0) < 0.1 ? (coin() ? x.lo() : x.hi()) : clamp(uniform(x.lo(), x.hi()), x); }

    kcert::Complex<double> sample(const kcert::ComplexInterval<double>& x) { return {sample(x.re()), sample(x.im())}; }

    std::mt19937_64& engine() { return gen_; }

private:
    static double clamp(double v, const kcert::RealInterval<double>& x) { return std::min(std::max(v, x.lo()), x.hi()); }

    std::mt19937_64 gen_;
};

}  // namespace oracle

#include "kcert/expr.hpp"

namespace oracle {

/// Exact value of an expression tree at a rational point.
inline QComplex eval_exact(const kcert::Node& node, const std::vector<QComplex>& x)
{
    switch (node.kind) {
    case kcert::NodeKind::constant:
        return {node.value.re, node.value.im};
    case kcert::NodeKind::variable:
        return x.at(node.variable);
    case kcert::NodeKind::add:
        return eval_exact(*node.lhs, x) + eval_exact(*node.rhs, x);
    case kcert::NodeKind::sub:
        return eval_exact(*node.lhs, x) - eval_exact(*node.rhs, x);
    case kcert::NodeKind::mul:
        return eval_exact(*node.lhs, x) * eval_exact(*node.rhs, x);
    case kcert::NodeKind::div:
        return eval_exact(*node.lhs, x) / eval_exact(*node.rhs, x);
    case kcert::NodeKind::neg:
        return QComplex{} - eval_exact(*node.lhs, x);
    case kcert::NodeKind::pow: {
        const QComplex base = eval_exact(*node.lhs, x);
        QComplex r{1, 0};
        for (int k = 0; k < std::abs(node.exponent); ++k) {
            r = r * base;
        }
        return node.exponent < 0 ? QComplex{1, 0} / r : r;
    }
    }
    return {};
}

/// Random polynomial expression in n variables with small integer and
/// dyadic coefficients, built as a tree of sums, products and powers.
inline kcert::NodePtr random_polynomial(Rng& rng, std::size_t n, int depth)
{
    if (depth == 0 || rng.integer(0, 4) == 0) {
        if (rng.coin()) {
            return kcert::make_variable(static_cast<std::size_t>(rng.integer(0, static_cast<int>(n) - 1)));
        }
        mpq_class c(rng.integer(-8, 8), 1 << rng.integer(0, 3));
        c.canonicalize();
        return kcert::make_constant(kcert::ExactComplex{c});
    }
    switch (rng.integer(0, 4)) {
    case 0:
        return kcert::make_binary(kcert::NodeKind::add, random_polynomial(rng, n, depth - 1),
                                  random_polynomial(rng, n, depth - 1));
    case 1:
        return kcert::make_binary(kcert::NodeKind::sub, random_polynomial(rng, n, depth - 1),
                                  random_polynomial(rng, n, depth - 1));
    case 2:
    case 3:
        return kcert::make_binary(kcert::NodeKind::mul, random_polynomial(rng, n, depth - 1),
                                  random_polynomial(rng, n, depth - 1));
    default:
        return kcert::make_pow(random_polynomial(rng, n, depth - 1), rng.integer(2, 3));
    }
}

}  // namespace oracle

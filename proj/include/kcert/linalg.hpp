#pragma once

// Vectors and matrices over complex points and complex intervals.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcert/interval.hpp"

namespace kcert {

template <class T>
using ComplexVector = std::vector<Complex<T>>;

/// Element of IC^n. A point x embeds as the degenerate box with lo = hi.
template <class T>
using IntervalBox = std::vector<ComplexInterval<T>>;

template <class E>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const E& fill = E{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    E& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const E& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<E>& data() const { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<E> data_;
};

template <class T>
using ComplexMatrix = Matrix<Complex<T>>;

template <class T>
using IntervalMatrix = Matrix<ComplexInterval<T>>;

/// Raised on mismatched dimensions.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_same(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

}  // namespace detail

template <class T>
IntervalBox<T> to_box(const ComplexVector<T>& x)
{
    IntervalBox<T> out;
    out.reserve(x.size());
    for (const auto& z : x) {
        out.push_back(ComplexInterval<T>::point(z));
    }
    return out;
}

template <class T>
IntervalMatrix<T> to_interval(const ComplexMatrix<T>& m)
{
    IntervalMatrix<T> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = ComplexInterval<T>::point(m(i, j));
        }
    }
    return out;
}

template <class T>
bool contains(const IntervalBox<T>& box, const ComplexVector<T>& x)
{
    detail::require_same(box.size(), x.size(), "contains");
    for (std::size_t j = 0; j < box.size(); ++j) {
        if (!box[j].contains(x[j])) {
            return false;
        }
    }
    return true;
}

template <class T>
IntervalBox<T> operator+(const IntervalBox<T>& a, const IntervalBox<T>& b)
{
    detail::require_same(a.size(), b.size(), "box add");
    IntervalBox<T> out;
    out.reserve(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out.push_back(a[j] + b[j]);
    }
    return out;
}

template <class T>
IntervalBox<T> operator-(const IntervalBox<T>& a, const IntervalBox<T>& b)
{
    detail::require_same(a.size(), b.size(), "box sub");
    IntervalBox<T> out;
    out.reserve(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out.push_back(a[j] - b[j]);
    }
    return out;
}

/// A*I computed as I_1*column_1 + ... + I_n*column_n.
template <class T>
IntervalBox<T> mat_vec(const IntervalMatrix<T>& a, const IntervalBox<T>& v)
{
    detail::require_same(a.cols(), v.size(), "mat_vec");
    if (a.cols() == 0) {
        throw DimensionError("mat_vec: empty operand");
    }
    IntervalBox<T> out;
    out.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out.push_back(v[0] * a(i, 0));
    }
    for (std::size_t j = 1; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            out[i] = out[i] + v[j] * a(i, j);
        }
    }
    return out;
}

template <class T>
IntervalMatrix<T> mat_mul(const IntervalMatrix<T>& a, const IntervalMatrix<T>& b)
{
    detail::require_same(a.cols(), b.rows(), "mat_mul");
    IntervalMatrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < b.cols(); ++k) {
            ComplexInterval<T> acc = a(i, 0) * b(0, k);
            for (std::size_t j = 1; j < a.cols(); ++j) {
                acc = acc + a(i, j) * b(j, k);
            }
            out(i, k) = std::move(acc);
        }
    }
    return out;
}

/// 1 - A for a square interval matrix.
template <class T>
IntervalMatrix<T> identity_minus(const IntervalMatrix<T>& a, PrecisionLevel level)
{
    if (!a.is_square()) {
        throw DimensionError("identity_minus: matrix is not square");
    }
    const auto one = RealInterval<T>::point(ScalarTraits<T>::from_double(1.0, level));
    const auto zero = RealInterval<T>::point(ScalarTraits<T>::zero(level));
    IntervalMatrix<T> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const ComplexInterval<T> id(i == j ? one : zero, zero);
            out(i, j) = id - a(i, j);
        }
    }
    return out;
}

/// Upper bound on the infinity operator norm over all point matrices in A:
/// max_i sum_j mag(A_ij).
template <class T>
T op_norm_inf(const IntervalMatrix<T>& a)
{
    if (a.rows() == 0) {
        throw DimensionError("op_norm_inf: empty matrix");
    }
    T best{};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T row = mag(a(i, 0));
        for (std::size_t j = 1; j < a.cols(); ++j) {
            row = add(row, mag(a(i, j)), Rounding::up);
        }
        if (i == 0 || best < row) {
            best = std::move(row);
        }
    }
    return best;
}

/// True iff every coordinate of `inner` lies strictly inside `outer`, in both
/// the real and imaginary parts.
template <class T>
bool subset_interior(const IntervalBox<T>& inner, const IntervalBox<T>& outer)
{
    detail::require_same(inner.size(), outer.size(), "subset_interior");
    for (std::size_t j = 0; j < inner.size(); ++j) {
        if (!inner[j].interior_of(outer[j])) {
            return false;
        }
    }
    return true;
}

/// True iff the closed boxes intersect in every coordinate.
template <class T>
bool overlaps(const IntervalBox<T>& a, const IntervalBox<T>& b)
{
    detail::require_same(a.size(), b.size(), "overlaps");
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (!a[j].intersects(b[j])) {
            return false;
        }
    }
    return true;
}

/// Raised when elimination meets an exactly zero pivot.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense LU factorization with partial pivoting over point complex numbers.
template <class T>
class LuFactorization {
public:
    explicit LuFactorization(ComplexMatrix<T> m) : lu_(std::move(m)), perm_(lu_.rows())
    {
        if (!lu_.is_square()) {
            throw DimensionError("LU: matrix is not square");
        }
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            perm_[i] = i;
        }
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pivot = k;
            T best = abs1(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                T cand = abs1(lu_(i, k));
                if (best < cand) {
                    best = std::move(cand);
                    pivot = i;
                }
            }
            if (ScalarTraits<T>::sign(best) == 0 || !ScalarTraits<T>::is_finite(best)) {
                throw SingularMatrixError("matrix is singular at working precision");
            }
            if (pivot != k) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(lu_(k, j), lu_(pivot, j));
                }
                std::swap(perm_[k], perm_[pivot]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const Complex<T> factor = lu_(i, k) / lu_(k, k);
                lu_(i, k) = factor;
                for (std::size_t j = k + 1; j < n; ++j) {
                    lu_(i, j) = lu_(i, j) - factor * lu_(k, j);
                }
            }
        }
    }

    ComplexVector<T> solve(const ComplexVector<T>& b) const
    {
        const std::size_t n = lu_.rows();
        detail::require_same(n, b.size(), "LU solve");
        ComplexVector<T> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex<T> acc = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) {
                acc = acc - lu_(i, j) * x[j];
            }
            x[i] = std::move(acc);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Complex<T> acc = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j) {
                acc = acc - lu_(ii, j) * x[j];
            }
            x[ii] = acc / lu_(ii, ii);
        }
        return x;
    }

    ComplexMatrix<T> inverse(PrecisionLevel level) const
    {
        const std::size_t n = lu_.rows();
        ComplexMatrix<T> out(n, n);
        const T zero = ScalarTraits<T>::zero(level);
        for (std::size_t k = 0; k < n; ++k) {
            ComplexVector<T> e(n, Complex<T>{zero, zero});
            e[k].re = ScalarTraits<T>::from_double(1.0, level);
            const ComplexVector<T> col = solve(e);
            for (std::size_t i = 0; i < n; ++i) {
                out(i, k) = col[i];
            }
        }
        return out;
    }

private:
    ComplexMatrix<T> lu_;
    std::vector<std::size_t> perm_;
};

}  // namespace kcert

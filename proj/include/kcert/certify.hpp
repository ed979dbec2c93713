#pragma once

// Krawczyk certification of candidate zeros, with precision escalation and
// reality/positivity classification.

#include <cstddef>
#include <string>
#include <vector>

#include "kcert/bigfloat.hpp"
#include "kcert/linalg.hpp"
#include "kcert/precision.hpp"
#include "kcert/slp.hpp"

namespace kcert {

struct Candidate {
    ComplexVector<double> x;
    std::size_t index = 0;
};

enum class Status { certified, not_certified };
enum class Reality { real, not_real, unknown };
enum class Positivity { yes, no, not_applicable };

const char* to_string(Status s);
const char* to_string(Reality r);
const char* to_string(Positivity p);

/// Outcome for one candidate. Evidence is stored at the precision it was
/// computed in (53-bit values for the native level), so later checks see the
/// exact binary bounds.
struct CertificateResult {
    std::size_t index = 0;
    Status status = Status::not_certified;
    std::string reason;
    IntervalBox<BigFloat> box;
    ComplexVector<BigFloat> refined_point;
    ComplexMatrix<BigFloat> conditioner;
    /// Upper bound on sqrt(2) * ||1 - Y JF(I)||_inf.
    BigFloat contraction_norm;
    Reality reality = Reality::unknown;
    Positivity positive = Positivity::not_applicable;
    PrecisionLevel precision_used;
    IntervalBox<BigFloat> krawczyk_image;

    bool certified() const { return status == Status::certified; }

    friend bool operator==(const CertificateResult&, const CertificateResult&) = default;
};

/// Dense LU inverse at working precision. Throws SingularMatrixError.
template <class T>
ComplexMatrix<T> approximate_inverse(const ComplexMatrix<T>& m)
{
    if (m.rows() == 0) {
        throw DimensionError("approximate_inverse: empty matrix");
    }
    return LuFactorization<T>(m).inverse(precision_of(m(0, 0).re));
}

template <class T>
struct NewtonResult {
    ComplexVector<T> x;
    int iterations = 0;
    /// Set when the Jacobian was singular or F could not be evaluated; `x` is
    /// then the best iterate reached.
    bool failed = false;
};

inline constexpr int kDefaultNewtonIterations = 8;

/// Newton's method at the precision carried by `x`. Stops when the update
/// grows (the growing step is rejected), falls below 4u(1 + ||x||), or after
/// `max_iter` steps.
template <class T>
NewtonResult<T> newton_refine(const CompiledSystem& sys, const ComplexVector<T>& x,
                              int max_iter = kDefaultNewtonIterations);

/// Box x ± r_j in real and imaginary parts, with
/// r_j = max(residual_j * u^(-1/4), 4u(1 + |x_j|)).
template <class T>
IntervalBox<T> inflate(const ComplexVector<T>& x, const std::vector<T>& residual_bound, PrecisionLevel level);

template <class T>
struct KrawczykEvaluation {
    IntervalBox<T> image;
    /// Upper bound on ||1 - Y JF(I)||_inf.
    T norm;
};

/// x - Y F(x) + (1 - Y JF(I))(I - x), with F(x) enclosed over the point box.
/// Throws EnclosureError for rational systems whose divisors vanish on I.
template <class T>
KrawczykEvaluation<T> krawczyk_evaluation(const CompiledSystem& sys, const IntervalBox<T>& box,
                                          const ComplexVector<T>& x, const ComplexMatrix<T>& y);

template <class T>
IntervalBox<T> krawczyk_operator(const CompiledSystem& sys, const IntervalBox<T>& box, const ComplexVector<T>& x,
                                 const ComplexMatrix<T>& y)
{
    return krawczyk_evaluation(sys, box, x, y).image;
}

/// One attempt at a single precision level. Reality is not classified here.
CertificateResult certify_at(const CompiledSystem& sys, const Candidate& cand, PrecisionLevel level);

/// Tries each level in order; every level starts Newton from the candidate
/// itself. Certified results are classified with check_reality.
CertificateResult certify_candidate(const CompiledSystem& sys, const Candidate& cand,
                                    const std::vector<PrecisionLevel>& ladder);

CertificateResult check_reality(const CompiledSystem& sys, const CertificateResult& res);

struct RefinementResult {
    ComplexVector<BigFloat> x;
    int iterations = 0;
    bool escaped = false;
};

/// x_i = x_{i-1} - Y F(x_{i-1}) with the certificate's Y, at the certificate's
/// precision. Stops early, returning the last iterate inside I, if rounding
/// pushes an iterate out of the box.
RefinementResult refine_in_box(const CompiledSystem& sys, const CertificateResult& res,
                               const ComplexVector<BigFloat>& x0, int k);

/// Certifies every candidate on an OpenMP team of `threads` threads (0 means
/// the runtime default). Results are in candidate order.
std::vector<CertificateResult> certify_all(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                                           const std::vector<PrecisionLevel>& ladder, int threads = 0);

/// Single-threaded reference for certify_all.
std::vector<CertificateResult> certify_all_serial(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                                                  const std::vector<PrecisionLevel>& ladder);

}  // namespace kcert

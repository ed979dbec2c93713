#include "kcert/certify.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace kcert {

const char* to_string(Status s)
{
    return s == Status::certified ? "certified" : "not_certified";
}

const char* to_string(Reality r)
{
    switch (r) {
    case Reality::real:
        return "real";
    case Reality::not_real:
        return "not_real";
    default:
        return "unknown";
    }
}

const char* to_string(Positivity p)
{
    switch (p) {
    case Positivity::yes:
        return "yes";
    case Positivity::no:
        return "no";
    default:
        return "not_applicable";
    }
}

namespace {

template <class T>
T from_big(const BigFloat& v, Rounding r, PrecisionLevel level);

template <>
double from_big<double>(const BigFloat& v, Rounding r, PrecisionLevel)
{
    return v.to_double(r);
}

template <>
BigFloat from_big<BigFloat>(const BigFloat& v, Rounding r, PrecisionLevel level)
{
    BigFloat out(level.significand_bits);
    mpfr_set(out.get(), v.get(), to_mpfr(r));
    return out;
}

template <class T>
BigFloat big(const T& v)
{
    return ScalarTraits<T>::to_big(v);
}

template <class T>
Complex<BigFloat> big(const Complex<T>& z)
{
    return {big(z.re), big(z.im)};
}

template <class T>
RealInterval<BigFloat> big(const RealInterval<T>& x)
{
    return {big(x.lo()), big(x.hi())};
}

template <class T>
ComplexVector<BigFloat> big(const ComplexVector<T>& x)
{
    ComplexVector<BigFloat> out;
    out.reserve(x.size());
    for (const auto& z : x) {
        out.push_back(big(z));
    }
    return out;
}

template <class T>
IntervalBox<BigFloat> big(const IntervalBox<T>& box)
{
    IntervalBox<BigFloat> out;
    out.reserve(box.size());
    for (const auto& z : box) {
        out.emplace_back(big(z.re()), big(z.im()));
    }
    return out;
}

template <class T>
ComplexMatrix<BigFloat> big(const ComplexMatrix<T>& m)
{
    ComplexMatrix<BigFloat> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = big(m(i, j));
        }
    }
    return out;
}

template <class T>
double sup_norm(const ComplexVector<T>& v)
{
    double out = 0.0;
    for (const auto& z : v) {
        out = std::max(out, ScalarTraits<T>::to_double(modulus_up(z), Rounding::up));
    }
    return out;
}

template <class T>
ComplexVector<T> point_mat_vec(const ComplexMatrix<T>& a, const ComplexVector<T>& v)
{
    ComplexVector<T> out;
    out.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex<T> acc = a(i, 0) * v[0];
        for (std::size_t j = 1; j < a.cols(); ++j) {
            acc = acc + a(i, j) * v[j];
        }
        out.push_back(std::move(acc));
    }
    return out;
}

template <class T>
bool all_finite(const ComplexVector<T>& v)
{
    return std::all_of(v.begin(), v.end(), [](const Complex<T>& z) {
        return ScalarTraits<T>::is_finite(z.re) && ScalarTraits<T>::is_finite(z.im);
    });
}

template <class T>
CertificateResult attempt(const CompiledSystem& sys, const Candidate& cand, PrecisionLevel level)
{
    CertificateResult res;
    res.index = cand.index;
    res.precision_used = level;
    res.contraction_norm = BigFloat(std::numeric_limits<double>::infinity(), 53);

    ComplexVector<T> x0;
    x0.reserve(cand.x.size());
    for (const auto& z : cand.x) {
        x0.push_back({ScalarTraits<T>::from_double(z.re, level), ScalarTraits<T>::from_double(z.im, level)});
    }
    const NewtonResult<T> newton = newton_refine(sys, x0);
    const ComplexVector<T>& x = newton.x;
    res.refined_point = big(x);
    if (!all_finite(x)) {
        res.reason = "Newton iteration diverged";
        return res;
    }

    ComplexMatrix<T> y;
    try {
        y = approximate_inverse(jacobian_point(sys, x));
    } catch (const SingularMatrixError&) {
        res.reason = "singular Jacobian";
        return res;
    } catch (const EvaluationError& e) {
        res.reason = std::string("evaluation failure: ") + e.what();
        return res;
    }
    res.conditioner = big(y);

    try {
        const IntervalBox<T> correction = mat_vec(to_interval(y), eval_interval(sys.f, to_box(x)));
        std::vector<T> residual;
        residual.reserve(correction.size());
        for (const auto& c : correction) {
            residual.push_back(mag(c));
        }
        const IntervalBox<T> box = inflate(x, residual, level);
        const KrawczykEvaluation<T> k = krawczyk_evaluation(sys, box, x, y);
        const T sqrt2 = sqrt_rounded(ScalarTraits<T>::from_double(2.0, level), Rounding::up);
        const T bound = mul(sqrt2, k.norm, Rounding::up);

        res.box = big(box);
        res.krawczyk_image = big(k.image);
        res.contraction_norm = big(bound);
        const bool inside = subset_interior(k.image, box);
        const bool contracts = bound < ScalarTraits<T>::from_double(1.0, level);
        if (inside && contracts) {
            res.status = Status::certified;
        } else if (!contracts) {
            res.reason = "contraction test failed: norm bound is not below 1";
        } else {
            res.reason = "contraction test failed: Krawczyk image not inside the box";
        }
    } catch (const EnclosureError& e) {
        res.reason = std::string("enclosure failure: ") + e.what();
    } catch (const DomainError& e) {
        res.reason = std::string("enclosure failure: ") + e.what();
    }
    return res;
}

}  // namespace

template <class T>
NewtonResult<T> newton_refine(const CompiledSystem& sys, const ComplexVector<T>& x, int max_iter)
{
    if (x.size() != sys.size()) {
        throw DimensionError("newton_refine: point has the wrong length");
    }
    const double u = precision_of(x.front().re).unit_roundoff();
    NewtonResult<T> out;
    out.x = x;
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        ComplexVector<T> step;
        try {
            const ComplexVector<T> fx = eval_point(sys.f, out.x);
            step = LuFactorization<T>(jacobian_point(sys, out.x)).solve(fx);
        } catch (const SingularMatrixError&) {
            out.failed = true;
            break;
        } catch (const EvaluationError&) {
            out.failed = true;
            break;
        }
        const double size = sup_norm(step);
        if (!std::isfinite(size)) {
            out.failed = true;
            break;
        }
        if (it > 0 && size > previous) {
            break;
        }
        for (std::size_t j = 0; j < step.size(); ++j) {
            out.x[j] = out.x[j] - step[j];
        }
        out.iterations = it + 1;
        if (size <= 4.0 * u * (1.0 + sup_norm(out.x))) {
            break;
        }
        previous = size;
    }
    return out;
}

template <class T>
IntervalBox<T> inflate(const ComplexVector<T>& x, const std::vector<T>& residual_bound, PrecisionLevel level)
{
    detail::require_same(x.size(), residual_bound.size(), "inflate");
    // u^(-1/4) = 2^(bits/4), rounded up
    BigFloat exponent(level.significand_bits / 4.0, 64);
    BigFloat factor_big(std::max(level.significand_bits, 64));
    mpfr_exp2(factor_big.get(), exponent.get(), MPFR_RNDU);
    const T factor = from_big<T>(factor_big, Rounding::up, level);
    const T four_u = ScalarTraits<T>::from_double(4.0 * level.unit_roundoff(), level);
    const T one = ScalarTraits<T>::from_double(1.0, level);

    IntervalBox<T> out;
    out.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        T r = mul(residual_bound[j], factor, Rounding::up);
        T floor = mul(four_u, add(one, modulus_up(x[j]), Rounding::up), Rounding::up);
        if (r < floor) {
            r = std::move(floor);
        }
        out.emplace_back(RealInterval<T>(sub(x[j].re, r, Rounding::down), add(x[j].re, r, Rounding::up)),
                         RealInterval<T>(sub(x[j].im, r, Rounding::down), add(x[j].im, r, Rounding::up)));
    }
    return out;
}

template <class T>
KrawczykEvaluation<T> krawczyk_evaluation(const CompiledSystem& sys, const IntervalBox<T>& box,
                                          const ComplexVector<T>& x, const ComplexMatrix<T>& y)
{
    detail::require_same(box.size(), x.size(), "krawczyk_operator");
    detail::require_same(y.rows(), x.size(), "krawczyk_operator");
    const PrecisionLevel level = precision_of(x.front().re);
    const IntervalBox<T> xb = to_box(x);
    const IntervalMatrix<T> yi = to_interval(y);
    const IntervalBox<T> fx = eval_interval(sys.f, xb);
    const IntervalMatrix<T> m = identity_minus(mat_mul(yi, jacobian_interval(sys, box)), level);
    KrawczykEvaluation<T> out;
    out.image = (xb - mat_vec(yi, fx)) + mat_vec(m, box - xb);
    out.norm = op_norm_inf(m);
    return out;
}

template NewtonResult<double> newton_refine(const CompiledSystem&, const ComplexVector<double>&, int);
template NewtonResult<BigFloat> newton_refine(const CompiledSystem&, const ComplexVector<BigFloat>&, int);
template IntervalBox<double> inflate(const ComplexVector<double>&, const std::vector<double>&, PrecisionLevel);
template IntervalBox<BigFloat> inflate(const ComplexVector<BigFloat>&, const std::vector<BigFloat>&, PrecisionLevel);
template KrawczykEvaluation<double> krawczyk_evaluation(const CompiledSystem&, const IntervalBox<double>&,
                                                        const ComplexVector<double>&, const ComplexMatrix<double>&);
template KrawczykEvaluation<BigFloat> krawczyk_evaluation(const CompiledSystem&, const IntervalBox<BigFloat>&,
                                                          const ComplexVector<BigFloat>&,
                                                          const ComplexMatrix<BigFloat>&);

CertificateResult certify_at(const CompiledSystem& sys, const Candidate& cand, PrecisionLevel level)
{
    if (cand.x.size() != sys.size()) {
        throw DimensionError("candidate " + std::to_string(cand.index) + " has length " +
                             std::to_string(cand.x.size()) + ", expected " + std::to_string(sys.size()));
    }
    if (level.is_native()) {
        return attempt<double>(sys, cand, level);
    }
    return attempt<BigFloat>(sys, cand, level);
}

CertificateResult certify_candidate(const CompiledSystem& sys, const Candidate& cand,
                                    const std::vector<PrecisionLevel>& ladder)
{
    if (ladder.empty()) {
        throw std::invalid_argument("certify_candidate: empty precision ladder");
    }
    CertificateResult last;
    for (const PrecisionLevel& level : ladder) {
        last = certify_at(sys, cand, level);
        if (last.certified()) {
            return check_reality(sys, last);
        }
    }
    return last;
}

CertificateResult check_reality(const CompiledSystem& sys, const CertificateResult& res)
{
    CertificateResult out = res;
    out.reality = Reality::unknown;
    out.positive = Positivity::not_applicable;
    if (!res.certified()) {
        return out;
    }
    if (sys.has_real_coefficients()) {
        bool conjugate_inside = true;
        for (std::size_t j = 0; j < res.box.size() && conjugate_inside; ++j) {
            const auto& k = res.krawczyk_image[j];
            conjugate_inside = k.re().subset_of(res.box[j].re()) && (-k.im()).subset_of(res.box[j].im());
        }
        if (conjugate_inside) {
            out.reality = Reality::real;
        }
    }
    if (out.reality != Reality::real) {
        for (const auto& z : res.box) {
            if (!z.im().contains_zero()) {
                out.reality = Reality::not_real;
                break;
            }
        }
        return out;
    }
    const bool positive =
        std::all_of(res.box.begin(), res.box.end(), [](const ComplexInterval<BigFloat>& z) { return z.re().lo().sign() > 0; });
    out.positive = positive ? Positivity::yes : Positivity::no;
    return out;
}

RefinementResult refine_in_box(const CompiledSystem& sys, const CertificateResult& res,
                               const ComplexVector<BigFloat>& x0, int k)
{
    if (!res.certified()) {
        throw std::invalid_argument("refine_in_box: certificate is not certified");
    }
    detail::require_same(x0.size(), sys.size(), "refine_in_box");
    const PrecisionLevel level{static_cast<int>(res.conditioner(0, 0).re.precision())};
    RefinementResult out;
    for (const auto& z : x0) {
        out.x.push_back({from_big<BigFloat>(z.re, Rounding::nearest, level),
                         from_big<BigFloat>(z.im, Rounding::nearest, level)});
    }
    for (int i = 0; i < k; ++i) {
        const ComplexVector<BigFloat> step = point_mat_vec(res.conditioner, eval_point(sys.f, out.x));
        ComplexVector<BigFloat> next = out.x;
        for (std::size_t j = 0; j < next.size(); ++j) {
            next[j] = next[j] - step[j];
        }
        if (!contains(res.box, next)) {
            out.escaped = true;
            break;
        }
        out.x = std::move(next);
        out.iterations = i + 1;
    }
    return out;
}

namespace {

CertificateResult guarded(const CompiledSystem& sys, const Candidate& cand, const std::vector<PrecisionLevel>& ladder)
{
    try {
        return certify_candidate(sys, cand, ladder);
    } catch (const std::exception& e) {
        CertificateResult res;
        res.index = cand.index;
        res.contraction_norm = BigFloat(std::numeric_limits<double>::infinity(), 53);
        res.reason = std::string("internal error: ") + e.what();
        return res;
    }
}

void check_inputs(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                  const std::vector<PrecisionLevel>& ladder)
{
    if (ladder.empty()) {
        throw std::invalid_argument("empty precision ladder");
    }
    for (const auto& c : candidates) {
        if (c.x.size() != sys.size()) {
            throw DimensionError("candidate " + std::to_string(c.index) + " has length " +
                                 std::to_string(c.x.size()) + ", expected " + std::to_string(sys.size()));
        }
    }
}

}  // namespace

std::vector<CertificateResult> certify_all(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                                           const std::vector<PrecisionLevel>& ladder, int threads)
{
    check_inputs(sys, candidates, ladder);
    std::vector<CertificateResult> out(candidates.size());
    const int team = threads > 0 ? threads : omp_get_max_threads();
    const auto count = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        out[static_cast<std::size_t>(k)] = guarded(sys, candidates[static_cast<std::size_t>(k)], ladder);
    }
    return out;
}

std::vector<CertificateResult> certify_all_serial(const CompiledSystem& sys, const std::vector<Candidate>& candidates,
                                                  const std::vector<PrecisionLevel>& ladder)
{
    check_inputs(sys, candidates, ladder);
    std::vector<CertificateResult> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        out.push_back(guarded(sys, c, ladder));
    }
    return out;
}

}  // namespace kcert

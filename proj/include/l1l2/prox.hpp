#pragma once

#include "l1l2/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace l1l2 {

/// Branch of the closed-form minimizer that produced a prox output.
///   kCase1: ||y||_inf >  lambda                       (scaled soft shrinkage)
///   kCase2: ||y||_inf == lambda                       (norm alpha*lambda on the maxima)
///   kCase3: (1-alpha)*lambda < ||y||_inf < lambda     (1-sparse)
///   kCase4: ||y||_inf <= (1-alpha)*lambda             (zero)
enum class ProxCase { kCase1 = 1, kCase2 = 2, kCase3 = 3, kCase4 = 4 };

/// Which of several maximal |y_i| carries the mass when the minimizer is not unique.
enum class TieRule { kLowestIndex, kHighestIndex };

template <typename Scalar>
struct ProxResult {
    Vec<Scalar> x;
    bool is_unique = true;
    ProxCase case_id = ProxCase::kCase4;
};

/// Relative tolerance used to classify ||y||_inf against lambda and (1-alpha)*lambda.
inline constexpr double kProxCaseTolerance = 1e-12;

namespace detail {

template <typename Scalar>
Scalar sign_or_positive(Scalar v)
{
    return v < 0 ? Scalar(-1) : Scalar(1);
}

template <typename Derived>
std::vector<Index> maximal_indices(const Eigen::MatrixBase<Derived>& y, typename Derived::Scalar ymax,
                                   typename Derived::Scalar tol)
{
    std::vector<Index> idx;
    for (Index i = 0; i < y.size(); ++i)
        if (std::abs(y(i)) >= ymax - tol)
            idx.push_back(i);
    return idx;
}

}  // namespace detail

/// Componentwise soft shrinkage S_1(y, lambda).
template <typename Derived>
Vec<typename Derived::Scalar> soft_shrink(const Eigen::MatrixBase<Derived>& y, typename Derived::Scalar lambda)
{
    using Scalar = typename Derived::Scalar;
    Vec<Scalar> out(y.size());
    for (Index i = 0; i < y.size(); ++i) {
        const Scalar v = y(i);
        out(i) = v > lambda ? v - lambda : (v < -lambda ? v + lambda : Scalar(0));
    }
    return out;
}

/// Classifies y into one of the four minimizer branches for step lambda and weight alpha.
template <typename Derived>
ProxCase classify_prox_case(const Eigen::MatrixBase<Derived>& y, typename Derived::Scalar lambda,
                            typename Derived::Scalar alpha)
{
    using Scalar = typename Derived::Scalar;
    const Scalar ymax = y.size() == 0 ? Scalar(0) : y.cwiseAbs().maxCoeff();
    const Scalar tol = Scalar(kProxCaseTolerance) * lambda;
    if (ymax > lambda + tol)
        return ProxCase::kCase1;
    if (ymax >= lambda - tol)
        return ProxCase::kCase2;
    if (alpha > 1)
        return ProxCase::kCase3;
    if (ymax > (1 - alpha) * lambda + tol)
        return ProxCase::kCase3;
    return ProxCase::kCase4;
}

/// Global minimizer of ||x||_1 - alpha*||x||_2 + ||x - y||^2 / (2*lambda).
///
/// When the minimizer is not unique (several components attain ||y||_inf in the
/// 1-sparse and boundary branches) the tie rule decides which component carries the
/// mass and `is_unique` is false. Throws std::invalid_argument for lambda <= 0 or
/// alpha < 0.
template <typename Derived>
ProxResult<typename Derived::Scalar> prox_l1_al2(const Eigen::MatrixBase<Derived>& y,
                                                 typename Derived::Scalar lambda,
                                                 typename Derived::Scalar alpha,
                                                 TieRule tie = TieRule::kLowestIndex)
{
    using Scalar = typename Derived::Scalar;
    if (!(lambda > 0))
        throw std::invalid_argument("prox_l1_al2: lambda must be > 0");
    if (!(alpha >= 0))
        throw std::invalid_argument("prox_l1_al2: alpha must be >= 0");

    ProxResult<Scalar> r;
    const Index n = y.size();
    r.x = Vec<Scalar>::Zero(n);
    r.case_id = classify_prox_case(y, lambda, alpha);
    if (n == 0)
        return r;

    const Scalar ymax = y.cwiseAbs().maxCoeff();
    const Scalar tol = Scalar(kProxCaseTolerance) * lambda;

    switch (r.case_id) {
    case ProxCase::kCase1: {
        Vec<Scalar> z = soft_shrink(y, lambda);
        const Scalar zn = z.norm();
        r.x = z * ((zn + alpha * lambda) / zn);
        return r;
    }
    case ProxCase::kCase2:
    case ProxCase::kCase3: {
        const Scalar norm = r.case_id == ProxCase::kCase2 ? alpha * lambda : ymax + (alpha - 1) * lambda;
        const auto maxima = detail::maximal_indices(y, ymax, tol);
        const Index i = tie == TieRule::kLowestIndex ? maxima.front() : maxima.back();
        r.x(i) = detail::sign_or_positive(y(i)) * norm;
        r.is_unique = maxima.size() == 1 || norm == 0;
        return r;
    }
    case ProxCase::kCase4:
        return r;
    }
    return r;
}

/// Every vertex minimizer: one per maximal component in branches 2 and 3, otherwise the
/// single minimizer. In branch 2 with ties the full optimal set is the part of the sphere
/// of radius alpha*lambda spanned by these vertices.
template <typename Derived>
std::vector<Vec<typename Derived::Scalar>> prox_candidates(const Eigen::MatrixBase<Derived>& y,
                                                           typename Derived::Scalar lambda,
                                                           typename Derived::Scalar alpha)
{
    using Scalar = typename Derived::Scalar;
    const ProxResult<Scalar> first = prox_l1_al2(y, lambda, alpha);
    if (first.is_unique)
        return {first.x};
    const Scalar ymax = y.cwiseAbs().maxCoeff();
    const Scalar norm = first.x.norm();
    std::vector<Vec<Scalar>> out;
    for (Index i : detail::maximal_indices(y, ymax, Scalar(kProxCaseTolerance) * lambda)) {
        Vec<Scalar> x = Vec<Scalar>::Zero(y.size());
        x(i) = detail::sign_or_positive(y(i)) * norm;
        out.push_back(std::move(x));
    }
    return out;
}

/// gamma * (||x||_1 - alpha * ||x||_2).
template <typename Derived>
typename Derived::Scalar eval_penalty(const Eigen::MatrixBase<Derived>& x,
                                      const PenaltySpec<typename Derived::Scalar>& spec)
{
    return spec.gamma * (x.template lpNorm<1>() - spec.alpha * x.norm());
}

/// F(x) = ||x||_1 - alpha*||x||_2 + ||x - y||^2 / (2*lambda), the function minimized by the prox.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar eval_moreau_objective(const Eigen::MatrixBase<DerivedX>& x,
                                                const Eigen::MatrixBase<DerivedY>& y,
                                                typename DerivedX::Scalar lambda,
                                                typename DerivedX::Scalar alpha)
{
    return x.template lpNorm<1>() - alpha * x.norm() + (x - y).squaredNorm() / (2 * lambda);
}

/// Coefficient c in F(x*) - F(x) <= c * ||x* - x||^2 for x* a prox output.
/// alpha/0 is read as 0 when alpha = 0 and +inf when alpha > 0.
template <typename Scalar>
Scalar prox_descent_coefficient(Scalar x_star_norm, Scalar lambda, Scalar alpha)
{
    if (x_star_norm == 0)
        return alpha == 0 ? -1 / (2 * lambda) : Scalar(0);
    return std::min(alpha / (2 * x_star_norm) - 1 / (2 * lambda), Scalar(0));
}

inline const char* to_string(ProxCase c)
{
    switch (c) {
    case ProxCase::kCase1: return "1";
    case ProxCase::kCase2: return "2";
    case ProxCase::kCase3: return "3";
    case ProxCase::kCase4: return "4";
    }
    return "?";
}

}  // namespace l1l2

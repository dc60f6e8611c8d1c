#pragma once

#include "l1l2/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace l1l2 {

enum class RankPolicy { kRequireFullRowRank, kAllowDeficient };

/// Orthonormal basis U (n x rank) of Range(A^T) from a column-pivoted QR of A^T.
/// Throws RankDeficientError for a zero matrix, or when A lacks full row rank under
/// kRequireFullRowRank.
template <typename Derived>
Mat<typename Derived::Scalar> orthonormal_range_basis(const Eigen::MatrixBase<Derived>& A,
                                                      RankPolicy policy = RankPolicy::kRequireFullRowRank)
{
    using Scalar = typename Derived::Scalar;
    const Mat<Scalar> At = A.transpose();
    Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(At);
    const Index r = qr.rank();
    if (r == 0)
        throw RankDeficientError("orthonormal_range_basis: zero matrix");
    if (policy == RankPolicy::kRequireFullRowRank && r < A.rows())
        throw RankDeficientError("orthonormal_range_basis: rank " + std::to_string(r) + " < " +
                                 std::to_string(A.rows()) + " rows");
    return qr.householderQ() * Mat<Scalar>::Identity(At.rows(), r);
}

template <typename Scalar>
struct ConstructionResult {
    Vec<Scalar> w;
    Vec<Scalar> b;
    bool converged = false;
    long pocs_iterations = 0;
    /// ||w^{k+1} - w^k|| per iteration.
    std::vector<Scalar> step_norms;
};

/// Projection onto Sign(x*): sign(x*_i) on the support, clipped to [-1, 1] elsewhere.
template <typename Scalar>
Vec<Scalar> project_sign_set(const Vec<Scalar>& v, const Vec<Scalar>& x_star)
{
    Vec<Scalar> w(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        if (x_star(i) > 0)
            w(i) = 1;
        else if (x_star(i) < 0)
            w(i) = -1;
        else
            w(i) = std::clamp(v(i), Scalar(-1), Scalar(1));
    }
    return w;
}

/// ||(I - U U^T)(w - alpha x*/||x*||)||: distance of the shifted certificate from Range(A^T).
template <typename Scalar>
Scalar range_residual(const Mat<Scalar>& U, const Vec<Scalar>& w, const Vec<Scalar>& x_star, Scalar alpha = 1)
{
    const Vec<Scalar> v = w - alpha * x_star / x_star.norm();
    return (v - U * (U.transpose() * v)).norm();
}

/// Alternating projections for w in Sign(x*) with w - alpha*x*/||x*|| in Range(U).
/// Starts from sign(x*) (zero off the support) and stops when ||w^{k+1} - w^k|| < tol;
/// `converged` is false if max_iter (default 10N) is reached first.
template <typename Scalar>
ConstructionResult<Scalar> pocs_sign_vector(const Mat<Scalar>& U, const Vec<Scalar>& x_star, Scalar tol = Scalar(1e-10),
                                            long max_iter = -1, Scalar alpha = 1)
{
    const Scalar xn = x_star.norm();
    if (!(xn > 0))
        throw std::invalid_argument("pocs_sign_vector: x* must be nonzero");
    if (U.rows() != x_star.size())
        throw std::invalid_argument("pocs_sign_vector: basis rows do not match signal length");
    if (max_iter < 0)
        max_iter = 10 * long(x_star.size());

    const Vec<Scalar> shift = alpha * x_star / xn;
    ConstructionResult<Scalar> res;
    res.w = project_sign_set<Scalar>(Vec<Scalar>::Zero(x_star.size()), x_star);
    Vec<Scalar> v;
    for (long k = 1; k <= max_iter; ++k) {
        v = U * (U.transpose() * (res.w - shift)) + shift;
        Vec<Scalar> w_next = project_sign_set(v, x_star);
        const Scalar d = (w_next - res.w).norm();
        res.w.swap(w_next);
        res.step_norms.push_back(d);
        res.pocs_iterations = k;
        if (d < tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

/// b = gamma*y + A x* where y is the minimum-norm solution of A^T y = w - alpha*x*/||x*||.
/// Throws std::runtime_error if that system is inconsistent (w not a valid certificate).
template <typename Scalar>
Vec<Scalar> construct_b(const Mat<Scalar>& A, const Vec<Scalar>& x_star, Scalar gamma, const Vec<Scalar>& w,
                        Scalar alpha = 1)
{
    if (!(gamma > 0))
        throw std::invalid_argument("construct_b: gamma must be positive");
    if (x_star.size() != A.cols() || w.size() != A.cols())
        throw std::invalid_argument("construct_b: dimension mismatch");
    const Scalar xn = x_star.norm();
    if (!(xn > 0))
        throw std::invalid_argument("construct_b: x* must be nonzero");
    const Vec<Scalar> v = w - alpha * x_star / xn;
    const Mat<Scalar> At = A.transpose();
    const Vec<Scalar> y = At.completeOrthogonalDecomposition().solve(v);
    const Scalar miss = (At * y - v).norm();
    if (miss > Scalar(1e-8) * std::max(Scalar(1), v.norm()))
        throw std::runtime_error("construct_b: w - x*/||x*|| is not in Range(A^T) (residual " + std::to_string(miss) +
                                 ")");
    return gamma * y + A * x_star;
}

/// Full pipeline: range basis, POCS, and b when POCS converged.
template <typename Scalar>
ConstructionResult<Scalar> construct_stationary_instance(const Mat<Scalar>& A, const Vec<Scalar>& x_star, Scalar gamma,
                                                         Scalar tol = Scalar(1e-10), long max_iter = -1,
                                                         Scalar alpha = 1)
{
    const Mat<Scalar> U = orthonormal_range_basis(A);
    auto res = pocs_sign_vector(U, x_star, tol, max_iter, alpha);
    if (res.converged)
        res.b = construct_b(A, x_star, gamma, res.w, alpha);
    return res;
}

}  // namespace l1l2

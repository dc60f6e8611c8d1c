#pragma once

#include "l1l2/rng.hpp"
#include "l1l2/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace l1l2 {

/// Sorted, duplicate-free set of column indices (0-based).
struct SupportSet {
    std::vector<Index> indices;

    Index size() const { return static_cast<Index>(indices.size()); }

    void validate(Index n) const
    {
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] < 0 || indices[i] >= n)
                throw std::out_of_range("support index " + std::to_string(indices[i]) + " outside [0, " +
                                        std::to_string(n) + ")");
            if (i > 0 && indices[i] <= indices[i - 1])
                throw std::invalid_argument("support indices must be strictly increasing");
        }
    }
};

template <typename Scalar>
struct SparseSignal {
    Vec<Scalar> x;
    SupportSet support;
};

/// min gamma*(||x||_1 - alpha*||x||_2) + 0.5*||Ax - b||^2 with optional ground truth.
template <typename Scalar>
struct ProblemInstance {
    Mat<Scalar> A;
    Vec<Scalar> b;
    std::optional<Vec<Scalar>> x_true;
    Scalar sigma{0};
    PenaltySpec<Scalar> penalty;

    Index rows() const { return A.rows(); }
    Index cols() const { return A.cols(); }

    void validate() const
    {
        if (A.rows() < 1 || A.cols() < 1)
            throw std::invalid_argument("sensing matrix must be non-empty");
        if (b.size() != A.rows())
            throw std::invalid_argument("measurement length " + std::to_string(b.size()) +
                                        " does not match matrix rows " + std::to_string(A.rows()));
        if (x_true && x_true->size() != A.cols())
            throw std::invalid_argument("ground truth length does not match matrix columns");
        penalty.validate();
    }
};

enum class ColumnNormalization {
    kNone,
    /// Subtract each column's mean, then scale it to unit Euclidean norm.
    kCenterUnitNorm,
    /// Subtract each column's mean, then scale it to unit sample variance (norm sqrt(m - 1)).
    kCenterUnitVariance,
};

namespace detail {

inline void check_dims(Index m, Index n)
{
    if (m < 1 || n < 1)
        throw std::invalid_argument("matrix dimensions must be positive, got " + std::to_string(m) + "x" +
                                    std::to_string(n));
}

}  // namespace detail

/// I.i.d. standard normal entries, filled column by column.
template <typename Scalar = double>
Mat<Scalar> gen_gaussian(Index m, Index n, std::uint64_t seed,
                         ColumnNormalization norm = ColumnNormalization::kNone)
{
    detail::check_dims(m, n);
    Rng rng(seed);
    Mat<Scalar> A(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i)
            A(i, j) = static_cast<Scalar>(rng.normal());
    if (norm != ColumnNormalization::kNone) {
        const Scalar target = norm == ColumnNormalization::kCenterUnitNorm ? Scalar(1) : std::sqrt(Scalar(m - 1));
        for (Index j = 0; j < n; ++j) {
            A.col(j).array() -= A.col(j).mean();
            const Scalar cn = A.col(j).norm();
            if (cn > 0)
                A.col(j) *= target / cn;
        }
    }
    return A;
}

/// Orthonormal DCT-II matrix: C(k, j) = s_k cos(pi (2j + 1) k / (2n)).
template <typename Scalar = double>
Mat<Scalar> dct_matrix(Index n)
{
    detail::check_dims(n, n);
    Mat<Scalar> C(n, n);
    const double pi = std::numbers::pi;
    for (Index k = 0; k < n; ++k) {
        const double s = k == 0 ? std::sqrt(1.0 / double(n)) : std::sqrt(2.0 / double(n));
        for (Index j = 0; j < n; ++j)
            C(k, j) = static_cast<Scalar>(s * std::cos(pi * double(2 * j + 1) * double(k) / double(2 * n)));
    }
    return C;
}

/// m distinct rows of the n x n orthonormal DCT-II matrix, in ascending row order.
template <typename Scalar = double>
Mat<Scalar> gen_partial_dct(Index m, Index n, std::uint64_t seed)
{
    detail::check_dims(m, n);
    if (m > n)
        throw std::invalid_argument("partial DCT needs m <= n, got m=" + std::to_string(m) + " n=" + std::to_string(n));
    Rng rng(seed);
    const auto rows = rng.sample_without_replacement(n, m);
    const Mat<Scalar> C = dct_matrix<Scalar>(n);
    Mat<Scalar> A(m, n);
    for (Index i = 0; i < m; ++i)
        A.row(i) = C.row(rows[static_cast<std::size_t>(i)]);
    return A;
}

/// Column j (1-based) is cos(2 pi w j / F) / sqrt(n) with w uniform on [0, 1)^m.
/// Larger F gives more coherent columns.
template <typename Scalar = double>
Mat<Scalar> gen_oversampled_dct(Index m, Index n, double F, std::uint64_t seed)
{
    detail::check_dims(m, n);
    if (!(F > 0))
        throw std::invalid_argument("over-sampled DCT needs F > 0");
    Rng rng(seed);
    std::vector<double> w(static_cast<std::size_t>(m));
    for (auto& v : w)
        v = rng.uniform01();
    const double scale = 1.0 / std::sqrt(double(n));
    const double pi = std::numbers::pi;
    Mat<Scalar> A(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i)
            A(i, j) = static_cast<Scalar>(scale * std::cos(2.0 * pi * w[static_cast<std::size_t>(i)] * double(j + 1) / F));
    return A;
}

/// Largest singular value by power iteration on the smaller Gram matrix.
/// Stops when successive estimates agree to relative accuracy tol; throws
/// std::runtime_error if that does not happen within max_iter iterations.
template <typename Derived>
typename Derived::Scalar power_iteration(const Eigen::MatrixBase<Derived>& A, typename Derived::Scalar tol = 1e-12,
                                         int max_iter = 10000)
{
    using Scalar = typename Derived::Scalar;
    const bool wide = A.rows() <= A.cols();
    const Mat<Scalar> G = wide ? Mat<Scalar>(A * A.transpose()) : Mat<Scalar>(A.transpose() * A);
    if (G.size() == 0 || G.cwiseAbs().maxCoeff() == 0)
        throw std::invalid_argument("power_iteration: zero matrix");
    Rng rng(0x706f776572ULL);
    Vec<Scalar> v = rng.normal_vector<Scalar>(G.rows());
    v.normalize();
    Scalar estimate = 0;
    for (int it = 0; it < max_iter; ++it) {
        Vec<Scalar> w = G * v;
        const Scalar next = v.dot(w);
        const Scalar wn = w.norm();
        if (wn == 0)
            throw std::runtime_error("power_iteration: start vector in null space");
        v = w / wn;
        if (it > 0 && std::abs(next - estimate) <= tol * std::abs(next))
            return std::sqrt(next);
        estimate = next;
    }
    throw std::runtime_error("power_iteration: no convergence after " + std::to_string(max_iter) + " iterations");
}

/// Largest singular value from a symmetric eigendecomposition of the smaller Gram matrix.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& A)
{
    using Scalar = typename Derived::Scalar;
    const bool wide = A.rows() <= A.cols();
    const Mat<Scalar> G = wide ? Mat<Scalar>(A * A.transpose()) : Mat<Scalar>(A.transpose() * A);
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), Scalar(0)));
}

/// A / sigma_max(A). Throws std::invalid_argument for a zero matrix.
template <typename Derived>
Mat<typename Derived::Scalar> spectral_normalize(const Eigen::MatrixBase<Derived>& A)
{
    const auto s = spectral_norm(A);
    if (!(s > 0))
        throw std::invalid_argument("spectral_normalize: zero matrix");
    return A / s;
}

/// Lipschitz constant of the gradient of 0.5*||Ax - b||^2, i.e. sigma_max(A)^2.
template <typename Derived>
typename Derived::Scalar lipschitz_constant(const Eigen::MatrixBase<Derived>& A)
{
    const auto s = spectral_norm(A);
    return s * s;
}

/// k-sparse vector of length n: uniform random support, standard normal values.
template <typename Scalar = double>
SparseSignal<Scalar> gen_sparse_signal(Index n, Index k, std::uint64_t seed)
{
    if (n < 1)
        throw std::invalid_argument("signal length must be positive");
    if (k < 0 || k > n)
        throw std::invalid_argument("sparsity " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    Rng rng(seed);
    SparseSignal<Scalar> s;
    s.support.indices = rng.sample_without_replacement(n, k);
    s.x = Vec<Scalar>::Zero(n);
    for (Index i : s.support.indices) {
        // Standard normal draws are nonzero with probability one; guard anyway so
        // the support invariant holds exactly.
        double v = 0;
        while (v == 0)
            v = rng.normal();
        s.x(i) = static_cast<Scalar>(v);
    }
    return s;
}

/// b = A x + sigma * noise with noise drawn from `seed`.
template <typename Scalar>
ProblemInstance<Scalar> make_instance(Mat<Scalar> A, const Vec<Scalar>& x, Scalar sigma,
                                      const PenaltySpec<Scalar>& penalty, std::uint64_t seed)
{
    if (x.size() != A.cols())
        throw std::invalid_argument("make_instance: signal length " + std::to_string(x.size()) +
                                    " does not match matrix columns " + std::to_string(A.cols()));
    if (!(sigma >= 0))
        throw std::invalid_argument("make_instance: sigma must be >= 0");
    ProblemInstance<Scalar> p;
    p.b = A * x;
    if (sigma > 0) {
        Rng rng(seed);
        p.b += sigma * rng.normal_vector<Scalar>(A.rows());
    }
    p.A = std::move(A);
    p.x_true = x;
    p.sigma = sigma;
    p.penalty = penalty;
    p.validate();
    return p;
}

/// sigma^2 * trace((A_S^T A_S)^{-1}): mean-square error of least squares on the true support.
template <typename Derived>
typename Derived::Scalar oracle_mse(const Eigen::MatrixBase<Derived>& A, const SupportSet& support,
                                    typename Derived::Scalar sigma)
{
    using Scalar = typename Derived::Scalar;
    support.validate(A.cols());
    const Index k = support.size();
    if (k == 0)
        return Scalar(0);
    Mat<Scalar> As(A.rows(), k);
    for (Index j = 0; j < k; ++j)
        As.col(j) = A.col(support.indices[static_cast<std::size_t>(j)]);
    const Mat<Scalar> G = As.transpose() * As;
    Eigen::LLT<Mat<Scalar>> llt(G);
    const Scalar scale = G.diagonal().maxCoeff();
    if (llt.info() != Eigen::Success || !(scale > 0))
        throw RankDeficientError("oracle_mse: restricted Gram matrix is singular");
    const Mat<Scalar> L = llt.matrixL();
    const Scalar min_pivot = L.diagonal().minCoeff();
    if (min_pivot * min_pivot <= Scalar(1e-14) * scale)
        throw RankDeficientError("oracle_mse: restricted Gram matrix is singular");
    const Mat<Scalar> inv = llt.solve(Mat<Scalar>::Identity(k, k));
    return sigma * sigma * inv.trace();
}

/// Largest normalized inner product between distinct columns.
template <typename Derived>
typename Derived::Scalar mutual_coherence(const Eigen::MatrixBase<Derived>& A)
{
    using Scalar = typename Derived::Scalar;
    Mat<Scalar> An = A;
    for (Index j = 0; j < An.cols(); ++j) {
        const Scalar cn = An.col(j).norm();
        if (cn > 0)
            An.col(j) /= cn;
    }
    Mat<Scalar> G = (An.transpose() * An).cwiseAbs();
    G.diagonal().setZero();
    return G.maxCoeff();
}

}  // namespace l1l2

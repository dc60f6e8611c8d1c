#pragma once

#include "l1l2/problems.hpp"
#include "l1l2/prox.hpp"
#include "l1l2/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace l1l2 {

/// Necessary conditions for global minimizers, evaluated on gamma*r_alpha + l.
/// Each flag is set only when its hypothesis applies to the point.
struct MinimizerConditions {
    /// x = 0: ||grad l(0)||_inf <= gamma*(1 - alpha).
    std::optional<bool> zero_point;
    /// ||x|| >= alpha*gamma/L: grad_S l + gamma*sign(x_S) has norm gamma*alpha and points along x_S.
    std::optional<bool> large_norm;
    /// 0 < ||x|| < alpha*gamma/L: x is 1-sparse with grad_i l = gamma*(alpha - 1)*sign(x_i) on the
    /// support and |grad_j l| <= gamma*max(0, 1 - alpha + ||x||_inf L/gamma) off it.
    std::optional<bool> small_norm;
};

template <typename Scalar>
struct StationarityReport {
    /// min over subgradients p of ||gamma*(p - alpha*x/||x||) + A^T(Ax - b)||.
    Scalar residual = 0;
    MinimizerConditions conditions;
    /// x is reproduced by one FBS step for every probed lambda < 1/L (and residual <= tol).
    bool is_fixed_point = false;
    /// Largest ||T_lambda(x) - x|| / lambda over the probes.
    Scalar fixed_point_gap = 0;
};

/// Stationarity residual of the first-order condition; at x = 0 the distance of -grad l(0)
/// from gamma*(B_inf - alpha*B_2).
template <typename Scalar>
Scalar stationarity_residual(const ProblemInstance<Scalar>& p, const Vec<Scalar>& x)
{
    const Scalar gamma = p.penalty.gamma;
    const Scalar alpha = p.penalty.alpha;
    const Vec<Scalar> g = gradient(p.A, p.b, x);
    const Scalar xn = x.norm();
    if (xn == 0)
        return std::max(Scalar(0), soft_shrink(g, gamma).norm() - gamma * alpha);
    Vec<Scalar> res(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        if (x(i) != 0) {
            const Scalar s = x(i) > 0 ? Scalar(1) : Scalar(-1);
            res(i) = gamma * (s - alpha * x(i) / xn) + g(i);
        } else {
            const Scalar a = std::abs(g(i)) - gamma;
            res(i) = a > 0 ? a : Scalar(0);
        }
    }
    return res.norm();
}

/// Report-only check of first-order stationarity, minimizer conditions and the FBS
/// fixed-point property for lambda in {0.25, 0.5, 0.75, 0.99} / L.
template <typename Scalar>
StationarityReport<Scalar> check_stationarity(const ProblemInstance<Scalar>& p, const Vec<Scalar>& x, Scalar tol)
{
    p.validate();
    if (x.size() != p.cols())
        throw std::invalid_argument("check_stationarity: point length does not match matrix columns");
    const Scalar gamma = p.penalty.gamma;
    const Scalar alpha = p.penalty.alpha;
    const Scalar L = lipschitz_constant(p.A);
    const Vec<Scalar> g = gradient(p.A, p.b, x);
    const Scalar xn = x.norm();

    StationarityReport<Scalar> rep;
    rep.residual = stationarity_residual(p, x);

    if (xn == 0) {
        rep.conditions.zero_point = g.template lpNorm<Eigen::Infinity>() <= gamma * (1 - alpha) + tol;
    } else if (xn >= alpha * gamma / L) {
        Scalar err = 0, norm_sq = 0;
        for (Index i = 0; i < x.size(); ++i) {
            if (x(i) == 0)
                continue;
            const Scalar w = g(i) + gamma * (x(i) > 0 ? 1 : -1);
            norm_sq += w * w;
            const Scalar d = w - gamma * alpha * x(i) / xn;
            err += d * d;
        }
        rep.conditions.large_norm = std::sqrt(err) <= tol && std::abs(std::sqrt(norm_sq) - gamma * alpha) <= tol;
    } else {
        Index nnz = 0;
        bool ok = true;
        const Scalar xinf = x.template lpNorm<Eigen::Infinity>();
        const Scalar off_bound = gamma * std::max(Scalar(0), 1 - alpha + xinf * L / gamma);
        for (Index i = 0; i < x.size(); ++i) {
            if (x(i) != 0) {
                ++nnz;
                ok = ok && std::abs(g(i) - gamma * (alpha - 1) * (x(i) > 0 ? 1 : -1)) <= tol;
            } else {
                ok = ok && std::abs(g(i)) <= off_bound + tol;
            }
        }
        rep.conditions.small_norm = ok && nnz == 1;
    }

    constexpr std::array<double, 4> kProbes{0.25, 0.5, 0.75, 0.99};
    bool fixed = true;
    for (double f : kProbes) {
        const Scalar lambda = Scalar(f) / L;
        const Vec<Scalar> y = x - lambda * g;
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (const auto& c : prox_candidates(y, lambda * gamma, alpha))
            best = std::min(best, (c - x).norm());
        rep.fixed_point_gap = std::max(rep.fixed_point_gap, best / lambda);
        fixed = fixed && best <= lambda * tol;
    }
    rep.is_fixed_point = fixed && rep.residual <= tol;
    return rep;
}

}  // namespace l1l2

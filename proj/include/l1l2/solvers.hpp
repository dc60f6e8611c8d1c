#pragma once

#include "l1l2/problems.hpp"
#include "l1l2/prox.hpp"
#include "l1l2/schedule.hpp"
#include "l1l2/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace l1l2 {

enum class Method { kFbs, kFbsAccelerated, kAdmm, kDca };

enum class TraceLevel {
    kSummary,   // final point and counters only
    kFull,      // one record per iteration
    kIterates,  // records plus a copy of every iterate
};

inline const char* to_string(Method m)
{
    switch (m) {
    case Method::kFbs: return "fbs";
    case Method::kFbsAccelerated: return "fbs_acc";
    case Method::kAdmm: return "admm";
    case Method::kDca: return "dca";
    }
    return "?";
}

/// Solver parameters. Unset optionals take problem-dependent defaults:
/// lambda = 0.99/L, delta = 10*gamma, alpha/gamma schedules = the problem's penalty.
template <typename Scalar>
struct SolverConfig {
    Method method = Method::kFbsAccelerated;
    std::optional<Scalar> lambda;
    std::optional<Scalar> delta;
    std::optional<ScheduleSpec> alpha_schedule;
    std::optional<ScheduleSpec> gamma_schedule;
    Scalar tol = Scalar(1e-8);
    int max_iter_factor = 10;
    std::optional<long> max_iter;
    TieRule tie_rule = TieRule::kLowestIndex;
    TraceLevel trace_level = TraceLevel::kFull;
    /// Subproblem solver for DCA (kAdmm or kFbs); defaults to ADMM with tol*1e-2 and 5N iterations.
    std::shared_ptr<const SolverConfig> inner;
};

template <typename Scalar>
struct IterationRecord {
    static constexpr Scalar kNaN = std::numeric_limits<Scalar>::quiet_NaN();

    long iter = 0;
    Scalar objective = kNaN;
    Scalar step = kNaN;
    long matvecs = 0;
    Scalar alpha = kNaN;
    Scalar gamma = kNaN;
    Scalar rel_err = kNaN;
    Scalar primal_residual = kNaN;    // ADMM: ||x - y||
    Scalar aug_lagrangian = kNaN;     // ADMM: L_delta(x, y, u)
    Scalar monitor_objective = kNaN;  // accelerated FBS: objective of the plain FBS candidate
};

template <typename Scalar>
struct SolverTrace {
    std::vector<IterationRecord<Scalar>> records;
    std::vector<Vec<Scalar>> iterates;
    Vec<Scalar> x;
    long iterations = 0;
    bool converged = false;
    long matvecs = 0;
    Scalar final_objective = std::numeric_limits<Scalar>::quiet_NaN();
    std::vector<std::string> warnings;
};

/// Raised before iterating when a stepsize violates the convergence bound.
class StepsizeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A with a running count of products by A and A^T.
template <typename Scalar>
class CountedOperator {
public:
    explicit CountedOperator(const Mat<Scalar>& A) : A_(A) {}

    template <typename In, typename Out>
    void apply(const In& x, Out& out)
    {
        ++count_;
        out.noalias() = A_ * x;
    }

    template <typename In, typename Out>
    void apply_transpose(const In& r, Out& out)
    {
        ++count_;
        out.noalias() = A_.transpose() * r;
    }

    const Mat<Scalar>& matrix() const { return A_; }
    long count() const { return count_; }

private:
    const Mat<Scalar>& A_;
    long count_ = 0;
};

/// A^T (A x - b); adds 2 to the operator's product count.
template <typename Scalar>
Vec<Scalar> gradient(CountedOperator<Scalar>& op, const Vec<Scalar>& b, const Vec<Scalar>& x)
{
    if (x.size() != op.matrix().cols() || b.size() != op.matrix().rows())
        throw std::invalid_argument("gradient: dimension mismatch");
    Vec<Scalar> Ax, g;
    op.apply(x, Ax);
    Ax -= b;
    op.apply_transpose(Ax, g);
    return g;
}

template <typename Scalar>
Vec<Scalar> gradient(const Mat<Scalar>& A, const Vec<Scalar>& b, const Vec<Scalar>& x)
{
    CountedOperator<Scalar> op(A);
    return gradient(op, b, x);
}

/// E(x) = gamma*(||x||_1 - alpha*||x||_2) + 0.5*||Ax - b||^2 given a precomputed Ax.
template <typename Scalar>
Scalar objective_value(const Vec<Scalar>& x, const Vec<Scalar>& Ax, const Vec<Scalar>& b, Scalar alpha, Scalar gamma)
{
    return gamma * (x.template lpNorm<1>() - alpha * x.norm()) + Scalar(0.5) * (Ax - b).squaredNorm();
}

template <typename Scalar>
Scalar objective_value(const ProblemInstance<Scalar>& p, const Vec<Scalar>& x)
{
    const Vec<Scalar> Ax = p.A * x;
    return objective_value<Scalar>(x, Ax, p.b, p.penalty.alpha, p.penalty.gamma);
}

/// Rejects lambda outside (0, 1/L]. The bound is checked with a 1e-9 relative slack so a
/// stepsize of exactly 1/L on a spectrally normalized matrix is admitted.
template <typename Scalar>
void validate_fbs_stepsize(Scalar lambda, Scalar lipschitz)
{
    if (!(lambda > 0))
        throw StepsizeError("FBS stepsize must be positive, got lambda=" + std::to_string(lambda));
    if (lambda * lipschitz > Scalar(1) + Scalar(1e-9)) {
        std::ostringstream os;
        os << "FBS stepsize lambda=" << lambda << " violates the descent bound lambda < 1/L = " << 1 / lipschitz
           << " (L = " << lipschitz << ")";
        throw StepsizeError(os.str());
    }
}

/// ADMM penalty thresholds: delta > sqrt(2) L for convex least squares, (3 + sqrt(17)) L / 2
/// for a general smooth loss.
template <typename Scalar>
struct AdmmThresholds {
    Scalar convex;
    Scalar nonconvex;
};

template <typename Scalar>
AdmmThresholds<Scalar> admm_thresholds(Scalar lipschitz)
{
    return {std::sqrt(Scalar(2)) * lipschitz, (3 + std::sqrt(Scalar(17))) * lipschitz / 2};
}

/// Empty when delta clears the convex threshold; otherwise a warning message.
template <typename Scalar>
std::optional<std::string> check_admm_penalty(Scalar delta, Scalar lipschitz)
{
    if (!(delta > 0))
        throw std::invalid_argument("ADMM penalty delta must be positive");
    const auto t = admm_thresholds(lipschitz);
    if (delta > t.convex)
        return std::nullopt;
    std::ostringstream os;
    os << "ADMM penalty delta=" << delta << " <= sqrt(2)*L=" << t.convex
       << "; convergence is only guaranteed above this value for least squares (above " << t.nonconvex
       << " for a nonconvex smooth loss)";
    return os.str();
}

namespace detail {

template <typename Scalar>
struct RunParams {
    Scalar lipschitz;
    Scalar lambda;
    Scalar delta;
    long max_iter;
    ScheduleSpec alpha;
    ScheduleSpec gamma;

    Scalar alpha_at(long k) const { return Scalar(schedule_value(alpha, k)); }
    Scalar gamma_at(long k) const { return Scalar(schedule_value(gamma, k)); }
};

template <typename Scalar>
RunParams<Scalar> resolve(const ProblemInstance<Scalar>& p, const SolverConfig<Scalar>& cfg)
{
    p.validate();
    if (!(cfg.tol > 0))
        throw std::invalid_argument("solver tolerance must be positive");
    RunParams<Scalar> rp;
    rp.lipschitz = lipschitz_constant(p.A);
    rp.lambda = cfg.lambda.value_or(Scalar(0.99) / rp.lipschitz);
    rp.delta = cfg.delta.value_or(10 * p.penalty.gamma);
    rp.max_iter = cfg.max_iter.value_or(long(cfg.max_iter_factor) * long(p.cols()));
    rp.alpha = cfg.alpha_schedule.value_or(ScheduleSpec::constant(double(p.penalty.alpha)));
    rp.gamma = cfg.gamma_schedule.value_or(ScheduleSpec::constant(double(p.penalty.gamma)));
    rp.alpha.validate();
    rp.gamma.validate();
    return rp;
}

template <typename Scalar>
Scalar rel_err(const ProblemInstance<Scalar>& p, const Vec<Scalar>& x)
{
    if (!p.x_true)
        return std::numeric_limits<Scalar>::quiet_NaN();
    const Scalar ref = p.x_true->norm();
    const Scalar diff = (x - *p.x_true).norm();
    return ref > 0 ? diff / ref : diff;
}

/// ||x_new - x_old|| / ||x_old||; NaN (never below tol) when both are zero.
template <typename Scalar>
Scalar relative_step(Scalar step, const Vec<Scalar>& x_old)
{
    return step / x_old.norm();
}

template <typename Scalar>
class Recorder {
public:
    Recorder(const ProblemInstance<Scalar>& p, TraceLevel level) : p_(p), level_(level) {}

    bool enabled() const { return level_ != TraceLevel::kSummary; }

    /// Adds a record; objective from a known Ax when given, otherwise computed without counting.
    void add(IterationRecord<Scalar> r, const Vec<Scalar>& x, const Vec<Scalar>* Ax)
    {
        if (!enabled())
            return;
        if (Ax)
            r.objective = objective_value<Scalar>(x, *Ax, p_.b, r.alpha, r.gamma);
        else
            r.objective = objective_value<Scalar>(x, Vec<Scalar>(p_.A * x), p_.b, r.alpha, r.gamma);
        r.rel_err = rel_err(p_, x);
        trace_.records.push_back(r);
        if (level_ == TraceLevel::kIterates)
            trace_.iterates.push_back(x);
    }

    SolverTrace<Scalar> finish(Vec<Scalar> x, long iterations, bool converged, long matvecs)
    {
        trace_.final_objective = objective_value(p_, x);
        trace_.x = std::move(x);
        trace_.iterations = iterations;
        trace_.converged = converged;
        trace_.matvecs = matvecs;
        return std::move(trace_);
    }

    void warn(std::string w) { trace_.warnings.push_back(std::move(w)); }

private:
    const ProblemInstance<Scalar>& p_;
    TraceLevel level_;
    SolverTrace<Scalar> trace_;
};

template <typename Scalar>
void check_start(const ProblemInstance<Scalar>& p, const Vec<Scalar>& x0)
{
    if (x0.size() != p.cols())
        throw std::invalid_argument("initial point length " + std::to_string(x0.size()) +
                                    " does not match matrix columns " + std::to_string(p.cols()));
    if (!x0.allFinite())
        throw std::invalid_argument("initial point has non-finite entries");
}

}  // namespace detail

/// One forward-backward step prox_{lambda*gamma*r_alpha}(x - lambda*grad).
template <typename Scalar>
Vec<Scalar> fbs_step(const Vec<Scalar>& x, const Vec<Scalar>& grad, Scalar lambda, Scalar alpha, Scalar gamma,
                     TieRule tie = TieRule::kLowestIndex)
{
    return prox_l1_al2(Vec<Scalar>(x - lambda * grad), lambda * gamma, alpha, tie).x;
}

/// Forward-backward splitting x <- prox(x - lambda*grad l(x)).
/// Throws StepsizeError when lambda > 1/L.
template <typename Scalar>
SolverTrace<Scalar> fbs_solve(const ProblemInstance<Scalar>& p, const SolverConfig<Scalar>& cfg, const Vec<Scalar>& x0)
{
    const auto rp = detail::resolve(p, cfg);
    detail::check_start(p, x0);
    validate_fbs_stepsize(rp.lambda, rp.lipschitz);

    CountedOperator<Scalar> op(p.A);
    detail::Recorder<Scalar> rec(p, cfg.trace_level);
    Vec<Scalar> x = x0, Ax, r, g, x_new, Ax_new;
    op.apply(x, Ax);
    {
        IterationRecord<Scalar> r0;
        r0.alpha = rp.alpha_at(1);
        r0.gamma = rp.gamma_at(1);
        r0.matvecs = op.count();
        rec.add(r0, x, &Ax);
    }

    bool converged = false;
    long k = 0;
    while (k < rp.max_iter) {
        ++k;
        const Scalar alpha = rp.alpha_at(k);
        const Scalar gamma = rp.gamma_at(k);
        r = Ax - p.b;
        op.apply_transpose(r, g);
        x_new = fbs_step<Scalar>(x, g, rp.lambda, alpha, gamma, cfg.tie_rule);
        op.apply(x_new, Ax_new);
        const Scalar step = (x_new - x).norm();
        const Scalar rel = detail::relative_step(step, x);
        x.swap(x_new);
        Ax.swap(Ax_new);

        IterationRecord<Scalar> rk;
        rk.iter = k;
        rk.step = step;
        rk.alpha = alpha;
        rk.gamma = gamma;
        rk.matvecs = op.count();
        rec.add(rk, x, &Ax);
        if (rel < cfg.tol) {
            converged = true;
            break;
        }
    }
    return rec.finish(std::move(x), k, converged, op.count());
}

/// Next momentum weight t' = (sqrt(4 t^2 + 1) + 1) / 2.
template <typename Scalar>
Scalar next_momentum(Scalar t)
{
    return (std::sqrt(4 * t * t + 1) + 1) / 2;
}

/// Monotone accelerated proximal gradient. Each iteration forms the extrapolated point,
/// takes a prox step from it and one from the current iterate, and keeps the candidate
/// with the lower objective (the plain step wins ties).
template <typename Scalar>
SolverTrace<Scalar> fbs_accelerated(const ProblemInstance<Scalar>& p, const SolverConfig<Scalar>& cfg,
                                    const Vec<Scalar>& x0)
{
    const auto rp = detail::resolve(p, cfg);
    detail::check_start(p, x0);
    validate_fbs_stepsize(rp.lambda, rp.lipschitz);

    CountedOperator<Scalar> op(p.A);
    detail::Recorder<Scalar> rec(p, cfg.trace_level);

    Vec<Scalar> x = x0, x_prev = x0, z = x0;
    Vec<Scalar> Ax, Ax_prev, Az;
    op.apply(x, Ax);
    Ax_prev = Ax;
    Az = Ax;
    Vec<Scalar> y, Ay, g, z_new, v, Az_new, Av;
    Scalar t_prev = 0, t = 1;
    {
        IterationRecord<Scalar> r0;
        r0.alpha = rp.alpha_at(1);
        r0.gamma = rp.gamma_at(1);
        r0.matvecs = op.count();
        rec.add(r0, x, &Ax);
    }

    bool converged = false;
    long k = 0;
    while (k < rp.max_iter) {
        ++k;
        const Scalar alpha = rp.alpha_at(k);
        const Scalar gamma = rp.gamma_at(k);
        const Scalar c1 = t_prev / t;
        const Scalar c2 = (t_prev - 1) / t;
        // A y follows from the stored products since y is a linear combination.
        y = x + c1 * (z - x) + c2 * (x - x_prev);
        Ay = Ax + c1 * (Az - Ax) + c2 * (Ax - Ax_prev);

        op.apply_transpose(Vec<Scalar>(Ay - p.b), g);
        z_new = fbs_step<Scalar>(y, g, rp.lambda, alpha, gamma, cfg.tie_rule);
        op.apply_transpose(Vec<Scalar>(Ax - p.b), g);
        v = fbs_step<Scalar>(x, g, rp.lambda, alpha, gamma, cfg.tie_rule);
        op.apply(z_new, Az_new);
        op.apply(v, Av);
        const Scalar Ez = objective_value<Scalar>(z_new, Az_new, p.b, alpha, gamma);
        const Scalar Ev = objective_value<Scalar>(v, Av, p.b, alpha, gamma);

        t_prev = t;
        t = next_momentum(t);
        x_prev.swap(x);
        Ax_prev.swap(Ax);
        if (Ez < Ev) {
            x = z_new;
            Ax = Az_new;
        } else {
            x = v;
            Ax = Av;
        }
        z.swap(z_new);
        Az.swap(Az_new);

        const Scalar step = (x - x_prev).norm();
        const Scalar rel = detail::relative_step(step, x_prev);
        IterationRecord<Scalar> rk;
        rk.iter = k;
        rk.step = step;
        rk.alpha = alpha;
        rk.gamma = gamma;
        rk.matvecs = op.count();
        rk.monitor_objective = Ev;
        rec.add(rk, x, &Ax);
        if (rel < cfg.tol) {
            converged = true;
            break;
        }
    }
    return rec.finish(std::move(x), k, converged, op.count());
}

template <typename Scalar>
struct AdmmState {
    Vec<Scalar> x;
    Vec<Scalar> y;
    Vec<Scalar> u;
};

/// ADMM for min r(x) + l(y) s.t. x = y with l = 0.5*||Ay - b||^2:
///   x <- prox_{(gamma/delta) r_alpha}(y - u + c/delta)
///   y <- (A^T A + delta I)^{-1} (A^T b + delta (x + u))
///   u <- u + x - y
/// where c is an optional linear term (DCA subproblems). The y-system is factored once;
/// when A is wide the m x m system A A^T + delta I is used instead.
template <typename Scalar>
class AdmmIteration {
public:
    AdmmIteration(CountedOperator<Scalar>& op, const Vec<Scalar>& b, Scalar delta, TieRule tie = TieRule::kLowestIndex)
        : op_(op), b_(b), delta_(delta), tie_(tie)
    {
        if (!(delta > 0))
            throw std::invalid_argument("ADMM penalty delta must be positive");
        const Mat<Scalar>& A = op.matrix();
        if (b.size() != A.rows())
            throw std::invalid_argument("ADMM: measurement length does not match matrix rows");
        wide_ = A.rows() < A.cols();
        if (wide_) {
            Mat<Scalar> K = A * A.transpose();
            K.diagonal().array() += delta;
            llt_.compute(K);
        } else {
            Mat<Scalar> K = A.transpose() * A;
            K.diagonal().array() += delta;
            llt_.compute(K);
        }
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("ADMM: factorization of the y-system failed");
        if (!wide_)
            op_.apply_transpose(b, Atb_);
    }

    void reset(AdmmState<Scalar> s)
    {
        const Index n = op_.matrix().cols();
        if (s.x.size() != n || s.y.size() != n || s.u.size() != n)
            throw std::invalid_argument("ADMM: state dimension mismatch");
        s_ = std::move(s);
        Ay_ = op_.matrix() * s_.y;
    }

    /// Warm start at x0 with y = x0 and the dual variable u = grad l(x0) / delta.
    void reset_warm(const Vec<Scalar>& x0)
    {
        AdmmState<Scalar> s;
        s.x = x0;
        s.y = x0;
        s.u = gradient(op_, b_, x0) / delta_;
        reset(std::move(s));
    }

    void step(Scalar alpha, Scalar gamma, const Vec<Scalar>* linear_term = nullptr)
    {
        Vec<Scalar> v = s_.y - s_.u;
        if (linear_term)
            v += *linear_term / delta_;
        s_.x = prox_l1_al2(v, gamma / delta_, alpha, tie_).x;

        if (wide_) {
            // With v = x + u: y = v + A^T s, s = (A A^T + delta I)^{-1} (b - A v), and A y = b - delta s.
            // Nothing is divided by delta, which keeps tiny penalties accurate on ill-conditioned A.
            rhs_ = s_.x + s_.u;
            op_.apply(rhs_, tmp_m_);
            tmp_m_ = llt_.solve(Vec<Scalar>(b_ - tmp_m_));
            op_.apply_transpose(tmp_m_, tmp_n_);
            s_.y = rhs_ + tmp_n_;
            Ay_ = b_ - delta_ * tmp_m_;
        } else {
            rhs_ = Atb_ + delta_ * (s_.x + s_.u);
            s_.y = llt_.solve(rhs_);
            op_.apply(s_.y, Ay_);
        }
        s_.u += s_.x - s_.y;
    }

    const AdmmState<Scalar>& state() const { return s_; }
    const Vec<Scalar>& Ay() const { return Ay_; }
    Scalar delta() const { return delta_; }

    /// L_delta(x, y, u) = gamma*r_alpha(x) + l(y) + delta<u, x - y> + delta/2 ||x - y||^2.
    Scalar augmented_lagrangian(Scalar alpha, Scalar gamma) const
    {
        const Vec<Scalar> d = s_.x - s_.y;
        return gamma * (s_.x.template lpNorm<1>() - alpha * s_.x.norm()) + Scalar(0.5) * (Ay_ - b_).squaredNorm() +
               delta_ * s_.u.dot(d) + delta_ / 2 * d.squaredNorm();
    }

private:
    CountedOperator<Scalar>& op_;
    const Vec<Scalar>& b_;
    Scalar delta_;
    TieRule tie_;
    bool wide_ = true;
    Eigen::LLT<Mat<Scalar>> llt_;
    Vec<Scalar> Atb_, rhs_, tmp_m_, tmp_n_, Ay_;
    AdmmState<Scalar> s_;
};

/// ADMM started from (x0, x0, grad l(x0)/delta). Warns (does not fail) when delta is
/// below the convergence threshold.
template <typename Scalar>
SolverTrace<Scalar> admm_solve(const ProblemInstance<Scalar>& p, const SolverConfig<Scalar>& cfg,
                               const Vec<Scalar>& x0)
{
    const auto rp = detail::resolve(p, cfg);
    detail::check_start(p, x0);

    CountedOperator<Scalar> op(p.A);
    detail::Recorder<Scalar> rec(p, cfg.trace_level);
    if (auto w = check_admm_penalty(rp.delta, rp.lipschitz))
        rec.warn(*w);

    AdmmIteration<Scalar> it(op, p.b, rp.delta, cfg.tie_rule);
    it.reset_warm(x0);
    {
        IterationRecord<Scalar> r0;
        r0.alpha = rp.alpha_at(1);
        r0.gamma = rp.gamma_at(1);
        r0.matvecs = op.count();
        r0.primal_residual = (it.state().x - it.state().y).norm();
        r0.aug_lagrangian = it.augmented_lagrangian(r0.alpha, r0.gamma);
        rec.add(r0, it.state().x, nullptr);
    }

    bool converged = false;
    long k = 0;
    Vec<Scalar> x_prev;
    while (k < rp.max_iter) {
        ++k;
        const Scalar alpha = rp.alpha_at(k);
        const Scalar gamma = rp.gamma_at(k);
        x_prev = it.state().x;
        it.step(alpha, gamma);
        const Scalar step = (it.state().x - x_prev).norm();
        const Scalar rel = detail::relative_step(step, x_prev);
        if (rec.enabled()) {
            IterationRecord<Scalar> rk;
            rk.iter = k;
            rk.step = step;
            rk.alpha = alpha;
            rk.gamma = gamma;
            rk.matvecs = op.count();
            rk.primal_residual = (it.state().x - it.state().y).norm();
            rk.aug_lagrangian = it.augmented_lagrangian(alpha, gamma);
            rec.add(rk, it.state().x, nullptr);
        }
        if (rel < cfg.tol) {
            converged = true;
            break;
        }
    }
    return rec.finish(it.state().x, k, converged, op.count());
}

/// Approximate minimizer of gamma*||x||_1 + 0.5*||Ax - b||^2 after exactly 2N ADMM
/// iterations from the zero state.
template <typename Scalar>
Vec<Scalar> l1_init(const ProblemInstance<Scalar>& p, Scalar gamma, std::optional<Scalar> delta = std::nullopt)
{
    p.validate();
    if (!(gamma > 0))
        throw std::invalid_argument("l1_init: gamma must be positive");
    CountedOperator<Scalar> op(p.A);
    AdmmIteration<Scalar> it(op, p.b, delta.value_or(10 * gamma));
    const Index n = p.cols();
    it.reset({Vec<Scalar>::Zero(n), Vec<Scalar>::Zero(n), Vec<Scalar>::Zero(n)});
    for (Index k = 0; k < 2 * n; ++k)
        it.step(Scalar(0), gamma);
    return it.state().x;
}

/// Difference-of-convex iteration: linearize -alpha*||x||_2 at the current point and solve
/// the convex subproblem gamma*||x||_1 - gamma*alpha<q, x> + l(x), q = x/||x||, with the
/// inner solver. Inner state is carried across outer iterations.
template <typename Scalar>
SolverTrace<Scalar> dca_solve(const ProblemInstance<Scalar>& p, const SolverConfig<Scalar>& cfg, const Vec<Scalar>& x0)
{
    const auto rp = detail::resolve(p, cfg);
    detail::check_start(p, x0);
    if (x0.norm() == 0)
        throw std::invalid_argument("DCA needs a nonzero initial point");

    const Index n = p.cols();
    SolverConfig<Scalar> inner;
    if (cfg.inner) {
        inner = *cfg.inner;
    } else {
        inner.method = Method::kAdmm;
        inner.tol = cfg.tol * Scalar(1e-2);
        inner.max_iter = 5 * long(n);
    }
    if (inner.method != Method::kAdmm && inner.method != Method::kFbs)
        throw std::invalid_argument("DCA inner solver must be ADMM or FBS");
    const Scalar inner_delta = inner.delta.value_or(cfg.delta.value_or(rp.delta));
    const Scalar inner_lambda = inner.lambda.value_or(Scalar(0.99) / rp.lipschitz);
    const long inner_max = inner.max_iter.value_or(long(inner.max_iter_factor) * long(n));

    CountedOperator<Scalar> op(p.A);
    detail::Recorder<Scalar> rec(p, cfg.trace_level);

    std::optional<AdmmIteration<Scalar>> admm;
    if (inner.method == Method::kAdmm) {
        if (auto w = check_admm_penalty(inner_delta, rp.lipschitz))
            rec.warn(*w);
        admm.emplace(op, p.b, inner_delta, cfg.tie_rule);
        admm->reset_warm(x0);
    } else {
        validate_fbs_stepsize(inner_lambda, rp.lipschitz);
    }

    Vec<Scalar> x = x0;
    {
        IterationRecord<Scalar> r0;
        r0.alpha = rp.alpha_at(1);
        r0.gamma = rp.gamma_at(1);
        r0.matvecs = op.count();
        rec.add(r0, x, nullptr);
    }

    bool converged = false;
    long outer = 0;
    Vec<Scalar> c, xin, xin_prev, g, r, Ax;
    while (outer < rp.max_iter) {
        ++outer;
        const Scalar alpha = rp.alpha_at(outer);
        const Scalar gamma = rp.gamma_at(outer);
        const Scalar xn = x.norm();
        // Subgradient 0 of ||.||_2 at the origin drops the linear term.
        c = xn > 0 ? Vec<Scalar>(gamma * alpha / xn * x) : Vec<Scalar>(Vec<Scalar>::Zero(n));

        if (admm) {
            for (long j = 0; j < inner_max; ++j) {
                xin_prev = admm->state().x;
                admm->step(Scalar(0), gamma, &c);
                const Scalar rel = detail::relative_step((admm->state().x - xin_prev).norm(), xin_prev);
                if (rel < inner.tol)
                    break;
            }
            xin = admm->state().x;
        } else {
            xin = x;
            op.apply(xin, Ax);
            for (long j = 0; j < inner_max; ++j) {
                r = Ax - p.b;
                op.apply_transpose(r, g);
                g -= c;
                xin_prev = xin;
                xin = soft_shrink(Vec<Scalar>(xin - inner_lambda * g), inner_lambda * gamma);
                op.apply(xin, Ax);
                const Scalar rel = detail::relative_step((xin - xin_prev).norm(), xin_prev);
                if (rel < inner.tol)
                    break;
            }
        }

        const Scalar step = (xin - x).norm();
        const Scalar rel = detail::relative_step(step, x);
        x = xin;
        IterationRecord<Scalar> rk;
        rk.iter = outer;
        rk.step = step;
        rk.alpha = alpha;
        rk.gamma = gamma;
        rk.matvecs = op.count();
        rec.add(rk, x, nullptr);
        if (rel < cfg.tol || (alpha == 0 && rp.alpha.is_constant())) {
            converged = true;
            break;
        }
    }
    return rec.finish(std::move(x), outer, converged, op.count());
}

/// Dispatches on cfg.method.
template <typename Scalar>
SolverTrace<Scalar> solve(const ProblemInstance<Scalar>& p, const SolverConfig<Scalar>& cfg, const Vec<Scalar>& x0)
{
    switch (cfg.method) {
    case Method::kFbs: return fbs_solve(p, cfg, x0);
    case Method::kFbsAccelerated: return fbs_accelerated(p, cfg, x0);
    case Method::kAdmm: return admm_solve(p, cfg, x0);
    case Method::kDca: return dca_solve(p, cfg, x0);
    }
    throw std::invalid_argument("unknown solver method");
}

}  // namespace l1l2

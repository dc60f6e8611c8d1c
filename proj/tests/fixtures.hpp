#pragma once

#include "l1l2/problems.hpp"

#include <cmath>

namespace l1l2::fixtures {

/// Value of the nonzero entry of the 1-sparse minimizers of the three-variable example.
inline double example1_peak() { return 1.2 - 1 / std::sqrt(2.0); }

/// ||x||_1 - ||x||_2 + 0.5 (x1 + x2 - c)^2 + 0.5 (x2 + x3 - c)^2 with c = example1_peak(); L = 3.
inline ProblemInstance<double> example1()
{
    ProblemInstance<double> p;
    p.A.resize(2, 3);
    p.A << 1, 1, 0, 0, 1, 1;
    p.b = Vec<double>::Constant(2, example1_peak());
    p.penalty = {1.0, 1.0};
    return p;
}

/// ||x||_1 - ||x||_2 + 0.5 (x1 + x2 - 1)^2; L = 2.
inline ProblemInstance<double> example2()
{
    ProblemInstance<double> p;
    p.A.resize(1, 2);
    p.A << 1, 1;
    p.b = Vec<double>::Ones(1);
    p.penalty = {1.0, 1.0};
    return p;
}

/// Spectrally normalized Gaussian m x n instance with a k-sparse ground truth and b = A x.
inline ProblemInstance<double> random_instance(Index m, Index n, Index k, std::uint64_t seed, double gamma,
                                               double alpha = 1.0)
{
    Mat<double> A = spectral_normalize(gen_gaussian(m, n, derive_seed(seed, Stream::kMatrix)));
    const auto s = gen_sparse_signal(n, k, derive_seed(seed, Stream::kSignal));
    return make_instance<double>(std::move(A), s.x, 0.0, {alpha, gamma}, 0);
}

}  // namespace l1l2::fixtures

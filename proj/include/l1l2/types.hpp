#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace l1l2 {

using Index = Eigen::Index;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Parameters of the regularizer gamma * (||x||_1 - alpha * ||x||_2).
template <typename Scalar>
struct PenaltySpec {
    Scalar alpha{1};
    Scalar gamma{1};

    void validate() const
    {
        if (!(alpha >= 0))
            throw std::invalid_argument("penalty alpha must be >= 0, got " + std::to_string(alpha));
        if (!(gamma > 0))
            throw std::invalid_argument("penalty gamma must be > 0, got " + std::to_string(gamma));
    }
};

/// Thrown by operations that require a numerically full-rank operand.
class RankDeficientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace l1l2

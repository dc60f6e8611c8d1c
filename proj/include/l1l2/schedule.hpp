#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace l1l2 {

/// Per-iteration value of a continuation parameter (alpha or gamma).
struct ScheduleSpec {
    enum class Kind { kConstant, kLinearCapped, kSigmoid };

    Kind kind = Kind::kConstant;
    double value = 0;  // kConstant
    double slope = 0;  // kLinearCapped
    double cap = 1;    // kLinearCapped
    double a = 1;      // kSigmoid
    double r = 1;      // kSigmoid, > 0

    static ScheduleSpec constant(double v) { return {Kind::kConstant, v}; }

    static ScheduleSpec linear_capped(double slope, double cap)
    {
        ScheduleSpec s;
        s.kind = Kind::kLinearCapped;
        s.slope = slope;
        s.cap = cap;
        return s;
    }

    static ScheduleSpec sigmoid(double a, double r)
    {
        ScheduleSpec s;
        s.kind = Kind::kSigmoid;
        s.a = a;
        s.r = r;
        s.validate();
        return s;
    }

    bool is_constant() const { return kind == Kind::kConstant; }

    void validate() const
    {
        if (kind == Kind::kSigmoid && !(r > 0))
            throw std::invalid_argument("sigmoid schedule needs r > 0");
    }
};

/// kConstant: value; kLinearCapped: min(cap, slope*k); kSigmoid: 1 / (1 + a*exp(-r*k)).
/// Throws std::domain_error when the sigmoid denominator vanishes at k.
inline double schedule_value(const ScheduleSpec& s, long k)
{
    if (k < 0)
        throw std::invalid_argument("schedule index must be >= 0");
    switch (s.kind) {
    case ScheduleSpec::Kind::kConstant:
        return s.value;
    case ScheduleSpec::Kind::kLinearCapped:
        return std::min(s.cap, s.slope * double(k));
    case ScheduleSpec::Kind::kSigmoid: {
        const double denom = 1.0 + s.a * std::exp(-s.r * double(k));
        if (denom == 0.0)
            throw std::domain_error("sigmoid schedule undefined at k=" + std::to_string(k));
        return 1.0 / denom;
    }
    }
    return s.value;
}

}  // namespace l1l2

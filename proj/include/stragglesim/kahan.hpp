#pragma once

namespace stragglesim {

/// Compensated accumulator. Used wherever a reported mean must not depend on
/// how trials were scheduled across threads.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace stragglesim

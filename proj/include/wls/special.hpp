#pragma once

#include <cmath>
#include <span>

namespace wls {

// log Gamma(x) for x > 0, reentrant.
double log_gamma(double x);

// log(Gamma(x - a) / Gamma(x)) for x - a > 0; switches to a Stirling
// difference when x is huge.
double log_gamma_ratio(double x, double a);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_dot(std::span<const double> a, std::span<const double> b);

}  // namespace wls

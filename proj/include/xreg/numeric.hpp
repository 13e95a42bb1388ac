#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xreg {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double mean(std::span<const double> v);

// Population variance (divides by n).
double population_variance(std::span<const double> v);

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Parses a full string as a finite double; returns false on any trailing text.
bool parse_double(std::string_view text, double& out);

// `count` equally spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace xreg

#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <span>

namespace fslphase {

// 50 significant decimal digits. Laser phases reach 1e14 rad at reduced light
// speeds while the corrections of interest sit near 1e-6 rad, so carrier terms
// and action integrals are accumulated in this type before any subtraction.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                           boost::multiprecision::et_off>;

inline Real to_real(double x) { return Real(x); }
inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            correction_ += (sum_ - t) + x;
        } else {
            correction_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

}  // namespace fslphase

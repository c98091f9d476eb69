#pragma once

#include <utility>

#include "noma/model.hpp"

namespace noma {

// Best weighted rate of one pair on one subcarrier as a function of the power
// q given to that subcarrier, with the split between the two users chosen
// optimally. The optimal strong-user power is min(q, cap) where cap is 0,
// infinite, or the interior stationary point of the split, so the curve is at
// most two concatenated single-user log segments and is concave in q.
class PairCurve {
public:
    PairCurve(const ProblemInstance& inst, int i, int m, int n);

    double value(double q) const;
    double slope(double q) const;
    // Largest q >= 0 with slope(q) >= nu; 0 when even slope(0) < nu. nu > 0.
    double power_for_slope(double nu) const;
    // Smallest budget that reaches the given weighted rate; +inf if none does.
    double min_power(double rate) const;
    // Natural powers (p_m, p_n) for budget q. For m == n both equal q.
    std::pair<double, double> split(double q) const;

    int m() const { return m_; }
    int n() const { return n_; }
    double strong_cap() const { return cap_; }

private:
    struct Segment {
        double weight = 0.0;
        double gain = 0.0;
        double length = 0.0;
    };
    Segment seg_[2];
    int count_ = 1;
    double cap_ = 0.0;
    int m_ = 0;
    int n_ = 0;
};

}  // namespace noma

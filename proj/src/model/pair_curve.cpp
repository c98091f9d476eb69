#include "noma/pair_curve.hpp"

#include <cmath>
#include <limits>

namespace noma {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);
}  // namespace

PairCurve::PairCurve(const ProblemInstance& inst, int i, int m, int n) : m_(m), n_(n) {
    if (!sic_valid(inst, i, m, n)) throw InvalidInput("PairCurve: SIC-invalid pair");
    const double hm = inst.gain(i, m), hn = inst.gain(i, n);
    const double wm = inst.weight(m), wn = inst.weight(n);
    if (m == n) {
        seg_[0] = {wm, hm, kInf};
        cap_ = kInf;
        return;
    }
    if (wn >= wm) {
        seg_[0] = {wn, hn, kInf};
        cap_ = kInf;
    } else if (wn * hn <= wm * hm) {
        seg_[0] = {wm, hm, kInf};
        cap_ = 0.0;
    } else {
        double b = (wn * hn - wm * hm) / (hm * hn * (wm - wn));
        seg_[0] = {wn, hn, b};
        seg_[1] = {wm, hm / (1.0 + hm * b), kInf};
        count_ = 2;
        cap_ = b;
    }
}

double PairCurve::value(double q) const {
    double x = std::fmin(q, seg_[0].length);
    double v = seg_[0].weight * std::log2(1.0 + seg_[0].gain * x);
    if (count_ == 2 && q > seg_[0].length)
        v += seg_[1].weight * std::log2(1.0 + seg_[1].gain * (q - seg_[0].length));
    return v;
}

double PairCurve::slope(double q) const {
    if (count_ == 1 || q < seg_[0].length)
        return seg_[0].weight * seg_[0].gain / ((1.0 + seg_[0].gain * q) * kLn2);
    double y = q - seg_[0].length;
    return seg_[1].weight * seg_[1].gain / ((1.0 + seg_[1].gain * y) * kLn2);
}

double PairCurve::power_for_slope(double nu) const {
    double x = seg_[0].weight / (nu * kLn2) - 1.0 / seg_[0].gain;
    if (x <= 0.0) return 0.0;
    if (count_ == 1 || x <= seg_[0].length) return x;
    double y = seg_[1].weight / (nu * kLn2) - 1.0 / seg_[1].gain;
    return seg_[0].length + std::fmax(0.0, y);
}

double PairCurve::min_power(double rate) const {
    if (rate <= 0.0) return 0.0;
    const Segment& a = seg_[0];
    double full = count_ == 2 ? a.weight * std::log2(1.0 + a.gain * a.length) : kInf;
    if (rate <= full) return a.weight > 0.0 ? std::expm1(rate / a.weight * kLn2) / a.gain : kInf;
    const Segment& b = seg_[1];
    if (!(b.weight > 0.0)) return kInf;
    return a.length + std::expm1((rate - full) / b.weight * kLn2) / b.gain;
}

std::pair<double, double> PairCurve::split(double q) const {
    if (m_ == n_) return {q, q};
    double b = std::fmin(q, cap_);
    return {q - b, b};
}

}  // namespace noma

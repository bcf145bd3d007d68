#pragma once

#include <algorithm>
#include <cassert>
#include <utility>
#include <vector>

namespace ffwnm {

/// Piecewise-linear voltage-vs-time waveform. Breakpoint times are
/// non-decreasing; evaluation clamps to the end values outside the range.
class Waveform {
public:
    Waveform() = default;

    explicit Waveform(std::vector<std::pair<double, double>> points)
        : points_(std::move(points)) {
        assert(!points_.empty());
        for (std::size_t i = 1; i < points_.size(); ++i)
            assert(points_[i].first >= points_[i - 1].first);
    }

    static Waveform dc(double volts) { return Waveform({{0.0, volts}}); }

    double at(double t) const {
        if (points_.empty()) return 0.0;
        if (t <= points_.front().first) return points_.front().second;
        if (t >= points_.back().first) return points_.back().second;
        auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double a, const auto& p) { return a < p.first; });
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *(it - 1);
        if (t1 == t0) return v1;
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }

    bool empty() const { return points_.empty(); }
    const std::vector<std::pair<double, double>>& points() const { return points_; }

    /// First time >= t_from at which the value crosses `level` in the given
    /// direction (linear interpolation between samples); negative if never.
    double first_crossing(double level, double t_from, bool rising) const {
        for (std::size_t i = 1; i < points_.size(); ++i) {
            const auto& [t0, v0] = points_[i - 1];
            const auto& [t1, v1] = points_[i];
            if (t1 < t_from) continue;
            const double ta = std::max(t0, t_from);
            const double va = (t1 == t0) ? v1 : v0 + (v1 - v0) * (ta - t0) / (t1 - t0);
            const bool crossed = rising ? (va < level && v1 >= level)
                                        : (va > level && v1 <= level);
            if (crossed) {
                if (v1 == va) return ta;
                return ta + (t1 - ta) * (level - va) / (v1 - va);
            }
        }
        return -1.0;
    }

private:
    std::vector<std::pair<double, double>> points_;
};

} // namespace ffwnm

#pragma once

#include <string>
#include <vector>

#include "ffwnm/errors.hpp"

namespace ffwnm {

/// Standard normal CDF, |error| <= 1e-10 over the real line (Cody's
/// rational minimax erfc underneath, so the practical accuracy is close
/// to machine epsilon).
double normal_cdf(double x);

/// Inverse standard normal CDF (Wichura's AS241 rational approximation).
/// Domain (0, 1); used by the Monte Carlo normal sampler.
double normal_cdf_inv(double p);

/// P{write-0 failure} = Phi((delta_v - mu)/sigma), the lower-tail mass of
/// the fitted V_writeL distribution below the input shift.
/// sigma <= 0 throws unless allow_degenerate, in which case the limiting
/// step function is returned.
double p_fail_low(double mu, double sigma, double delta_v, bool allow_degenerate = false);

/// P{write-1 failure} = 1 - Phi((vdd - delta_v - mu)/sigma): upper-tail
/// mass of the fitted V_writeH distribution above vdd - delta_v.
double p_fail_high(double mu, double sigma, double delta_v, double vdd,
                   bool allow_degenerate = false);

struct StatSummary;  // variation.hpp

/// Failure probability against input voltage shift, both logic branches
/// on a shared ascending grid.
struct FailureCurve {
    std::vector<double> delta_v;
    std::vector<double> p_low;
    std::vector<double> p_high;
    std::string source_low;   // identifier of the feeding summary
    std::string source_high;
};

FailureCurve build_curve(const StatSummary& summary_low, const StatSummary& summary_high,
                         double vdd, const std::vector<double>& grid,
                         bool allow_degenerate = false);

std::vector<double> default_delta_v_grid(double vdd, double step_v = 1e-3);

} // namespace ffwnm

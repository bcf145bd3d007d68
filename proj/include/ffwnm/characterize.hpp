#pragma once

#include <functional>
#include <string>
#include <utility>

#include "ffwnm/aging.hpp"
#include "ffwnm/engine.hpp"
#include "ffwnm/netlist.hpp"

namespace ffwnm {

/// Data-to-clock slack regime for margin extraction. LONG fixes the data
/// settle time at 2 ns ahead of the capturing edge; ZERO places the data
/// edge at the minimum setup time (the 10-year design reference).
enum class SlackMode { Long, Zero };

enum class QEdge { Rise, Fall };

const char* to_string(SlackMode m);
SlackMode slack_mode_from_string(const std::string& s);

/// Harness parameters for the clocked write test. The clock is a
/// trapezoid with 10 ps ramps and 50% duty; all reported results use the
/// 1 GHz reference unless a study overrides the frequency.
struct CharacterizeSetup {
    double clock_freq_hz = 1e9;
    double edge_time_s = 10e-12;
    double long_slack_s = 2e-9;
    double zero_slack_setup_s = 0.0;  // D-to-CK offset for ZERO mode
    double dt_max_s = 0.0;            // 0 = clock period / 2000
    SimOptions sim;

    double period_s() const { return 1.0 / clock_freq_hz; }
    double dt_max() const { return dt_max_s > 0.0 ? dt_max_s : period_s() / 2000.0; }
};

/// Write thresholds and noise margins of one circuit instance.
struct WnmSample {
    double v_write_l = 0.0;
    double v_write_h = 0.0;
    double wnm_l = 0.0;
    double wnm_h = 0.0;
};

struct TimingResult {
    double t_ck_to_q_rise_s = 0.0;
    double t_ck_to_q_fall_s = 0.0;
    double t_setup_min_rise_s = 0.0;
    double t_setup_min_fall_s = 0.0;

    double worst_setup_s() const {
        return t_setup_min_rise_s > t_setup_min_fall_s ? t_setup_min_rise_s
                                                       : t_setup_min_fall_s;
    }
};

/// Q is considered correctly written when it sits within 0.1*vdd of the
/// expected rail at the cycle end AND, from the first moment it enters
/// that band inside the window, it never leaves it again.
/// Throws CharacterizationError if the waveform does not cover the window.
bool output_correct(const Waveform& q, bool expected_high, double t_edge,
                    double t_cycle_end, const TechnologyConfig& tech);

/// Deterministic bisection cores. The predicate must be monotone (true
/// below / above the sought threshold); the bracket endpoints are assumed,
/// not evaluated. Exactly ceil(log2((hi-lo)/tol)) evaluations are spent.
struct BisectResult {
    double value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int evaluations = 0;
};

BisectResult bisect_highest_true(const std::function<bool(double)>& ok, double lo,
                                 double hi, double tol);
BisectResult bisect_lowest_true(const std::function<bool(double)>& ok, double lo,
                                double hi, double tol);

/// Clock 50% crossing to Q 50% crossing, full-rail D, LONG slack.
double measure_clk_to_q(const Circuit& cell, QEdge edge, const TechnologyConfig& tech,
                        const AgingState* aging, const CharacterizeSetup& setup);

/// Smallest D-to-CK offset keeping clock-to-Q within 110% of the LONG
/// slack value, bisected to 0.1 ps.
double min_setup_time(const Circuit& cell, QEdge edge, const TechnologyConfig& tech,
                      const AgingState* aging, const CharacterizeSetup& setup);

TimingResult characterize_timing(const Circuit& cell, const TechnologyConfig& tech,
                                 const AgingState* aging, const CharacterizeSetup& setup);

/// Highest D voltage still captured as logic 0 (searched on [0, vdd] to
/// 0.001*vdd). Throws CharacterizationError when the instance is
/// degenerate (fails at full rail); batch flows use characterize_wnm which
/// flags instead.
double find_v_write_low(const Circuit& cell, SlackMode mode, const TechnologyConfig& tech,
                        const AgingState* aging, const CharacterizeSetup& setup);

/// Lowest D voltage captured as logic 1; mirror of find_v_write_low.
double find_v_write_high(const Circuit& cell, SlackMode mode, const TechnologyConfig& tech,
                         const AgingState* aging, const CharacterizeSetup& setup);

/// WNM_L = V_writeL, WNM_H = VDD - V_writeH.
std::pair<double, double> wnm(double v_write_l, double v_write_h, double vdd);

struct WnmOutcome {
    bool degenerate = false;  // failed a full-rail write; no valid sample
    WnmSample sample;
};

/// Both margins of one instance; degenerate instances are flagged rather
/// than thrown so Monte Carlo loops can count them.
WnmOutcome characterize_wnm(const Circuit& cell, SlackMode mode,
                            const TechnologyConfig& tech, const AgingState* aging,
                            const CharacterizeSetup& setup);

} // namespace ffwnm

#pragma once

#include <cstdint>
#include <vector>

#include "ffwnm/characterize.hpp"

namespace ffwnm {

/// Stateless counter-based generator: every variate is a pure function of
/// (seed, trial, dim), so trial substreams are independent of scheduling
/// and worker count, and removing one trial never perturbs another.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Uniform draw strictly inside (0, 1).
    double uniform(std::uint64_t trial, std::uint64_t dim) const;

    /// Standard normal via the inverse-CDF transform.
    double normal(std::uint64_t trial, std::uint64_t dim) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

struct StatSummary {
    long n = 0;
    double mean = 0.0;
    double std = 0.0;   // unbiased
    double min = 0.0;
    double max = 0.0;
    long degenerate_count = 0;
};

/// Welford single-pass moments; throws ConfigError for n < 2.
StatSummary summarize(const std::vector<double>& samples);

/// Anderson-Darling composite normality against N(mean, std) with both
/// parameters estimated from the data; the statistic carries the
/// (1 + 0.75/n + 2.25/n^2) small-sample modification and passes below the
/// 1% point of 1.035 (D'Agostino & Stephens, table 4.7).
struct NormalityResult {
    double statistic = 0.0;
    bool pass = false;
    bool zero_variance = false;
};

NormalityResult normality_check(std::vector<double> samples);

/// Independent N(mu, sigma) draw per varying parameter (Table-II style
/// configuration lives in TechnologyConfig); non-positive draws are
/// rejected and redrawn on a fresh counter. More than 100 consecutive
/// rejections for one parameter is a configuration error.
ProcessSample sample_params(const TechnologyConfig& tech, const CounterRng& rng,
                            std::uint64_t trial, long* rejections = nullptr);

struct McConfig {
    long n_trials = 10000;
    std::uint64_t seed = 1;
    std::vector<double> ages_years{0, 2, 4, 6, 8, 10};
    std::vector<SlackMode> modes{SlackMode::Long, SlackMode::Zero};
    std::vector<FlipFlopKind> kinds{all_flipflop_kinds().begin(), all_flipflop_kinds().end()};
    std::vector<Technology> technologies{Technology::Cmos16, Technology::Finfet16};
    int workers = 0;          // 0 = hardware concurrency
    bool keep_trials = true;  // retain the per-trial rows
};

/// Everything a characterization run needs besides the MC settings.
struct McContext {
    TechnologyConfig cmos = default_technology(Technology::Cmos16);
    TechnologyConfig finfet = default_technology(Technology::Finfet16);
    AgingParams aging;
    CharacterizeSetup setup;

    const TechnologyConfig& tech(Technology t) const {
        return t == Technology::Cmos16 ? cmos : finfet;
    }
};

struct TrialRecord {
    long trial = 0;
    bool degenerate = false;
    bool failed = false;  // engine did not converge
    WnmSample sample;
};

struct McCell {
    FlipFlopKind kind = FlipFlopKind::A_TgStatic;
    Technology tech = Technology::Cmos16;
    double age_years = 0.0;
    SlackMode mode = SlackMode::Long;
    StatSummary v_write_l;
    StatSummary v_write_h;
    long failed_trials = 0;
    std::vector<TrialRecord> trials;       // when keep_trials
    std::vector<double> samples_l;         // successful trials, ascending trial id
    std::vector<double> samples_h;
};

struct McResult {
    std::vector<McCell> cells;
};

/// Minimum setup time of the nominal 10-year-aged cell, worst Q edge:
/// the design reference used as the ZERO-slack data offset.
double zero_slack_reference(FlipFlopKind kind, Technology t, const McContext& ctx);

/// Nominal (mean-parameter) characterization of one combination, using the
/// same harness as the MC trials.
WnmOutcome nominal_wnm(FlipFlopKind kind, Technology t, double age_years, SlackMode mode,
                       const McContext& ctx, double setup_reference_s = -1.0);

/// Monte Carlo sweep over every configured combination. Deterministic for
/// a fixed seed regardless of worker count; aborts if more than 5% of the
/// trials of any combination fail to simulate.
McResult run_mc(const McConfig& cfg, const McContext& ctx);

} // namespace ffwnm

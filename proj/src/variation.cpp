#include "ffwnm/variation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "ffwnm/failprob.hpp"

namespace ffwnm {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

double CounterRng::uniform(std::uint64_t trial, std::uint64_t dim) const {
    const std::uint64_t word = mix64(mix64(mix64(seed_) ^ trial) ^ dim);
    return (static_cast<double>(word >> 11) + 0.5) * 0x1p-53;
}

double CounterRng::normal(std::uint64_t trial, std::uint64_t dim) const {
    return normal_cdf_inv(uniform(trial, dim));
}

StatSummary summarize(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw ConfigError("summarize: need at least two samples");
    StatSummary s;
    s.n = static_cast<long>(samples.size());
    s.min = samples[0];
    s.max = samples[0];
    double mean = 0.0, m2 = 0.0;
    long k = 0;
    for (double x : samples) {
        ++k;
        const double d = x - mean;
        mean += d / k;
        m2 += d * (x - mean);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = mean;
    s.std = std::sqrt(m2 / (s.n - 1));
    return s;
}

NormalityResult normality_check(std::vector<double> samples) {
    const long n = static_cast<long>(samples.size());
    if (n < 100)
        throw ConfigError("normality_check: need at least 100 samples");
    NormalityResult r;
    const StatSummary s = summarize(samples);
    if (s.std <= 0.0) {
        r.zero_variance = true;
        return r;
    }
    std::sort(samples.begin(), samples.end());
    double a2 = 0.0;
    for (long i = 0; i < n; ++i) {
        double z_lo = normal_cdf((samples[i] - s.mean) / s.std);
        double z_hi = normal_cdf((samples[n - 1 - i] - s.mean) / s.std);
        z_lo = std::clamp(z_lo, 1e-300, 1.0 - 1e-16);
        z_hi = std::clamp(z_hi, 1e-300, 1.0 - 1e-16);
        a2 += (2.0 * i + 1.0) * (std::log(z_lo) + std::log1p(-z_hi));
    }
    a2 = -static_cast<double>(n) - a2 / n;
    r.statistic = a2 * (1.0 + 0.75 / n + 2.25 / (static_cast<double>(n) * n));
    r.pass = r.statistic < 1.035;  // 1% point, both parameters estimated
    return r;
}

namespace {

// Stable dim assignment so every parameter has its own substream.
enum ParamDim : std::uint64_t {
    kDimToxeN = 0,
    kDimToxeP = 1,
    kDimL = 2,
    kDimW = 3,
    kDimHFin = 4,
    kDimTFin = 5,
    kDimCount = 6,
};

double draw_positive(const CounterRng& rng, std::uint64_t trial, std::uint64_t dim,
                     double mu, double sigma, long* rejections) {
    for (int attempt = 0; attempt <= 100; ++attempt) {
        const double v = mu + sigma * rng.normal(trial, dim + kDimCount * attempt);
        if (v > 0.0) return v;
        if (rejections) ++*rejections;
    }
    throw ConfigError("sample_params: 100 consecutive non-positive draws; "
                      "check mean/sigma configuration");
}

} // namespace

ProcessSample sample_params(const TechnologyConfig& tech, const CounterRng& rng,
                            std::uint64_t trial, long* rejections) {
    ProcessSample s = tech.nominal;
    const ProcessSigma& g = tech.sigma;
    s.t_oxe_n_nm = draw_positive(rng, trial, kDimToxeN, tech.nominal.t_oxe_n_nm,
                                 g.t_oxe_n_nm, rejections);
    s.t_oxe_p_nm = draw_positive(rng, trial, kDimToxeP, tech.nominal.t_oxe_p_nm,
                                 g.t_oxe_p_nm, rejections);
    s.l_nm = draw_positive(rng, trial, kDimL, tech.nominal.l_nm, g.l_nm, rejections);
    if (tech.technology == Technology::Cmos16) {
        s.w_nm = draw_positive(rng, trial, kDimW, tech.nominal.w_nm, g.w_nm, rejections);
    } else {
        s.h_fin_nm = draw_positive(rng, trial, kDimHFin, tech.nominal.h_fin_nm,
                                   g.h_fin_nm, rejections);
        s.t_fin_nm = draw_positive(rng, trial, kDimTFin, tech.nominal.t_fin_nm,
                                   g.t_fin_nm, rejections);
    }
    return s;
}

double zero_slack_reference(FlipFlopKind kind, Technology t, const McContext& ctx) {
    const TechnologyConfig& tech = ctx.tech(t);
    Circuit cell = attach_fo4_load(build_flipflop(kind, tech), tech);
    AgingState aged = apply_stress(cell, tech, ctx.aging, 10.0);
    CharacterizeSetup setup = ctx.setup;
    TimingResult timing;
    timing.t_setup_min_rise_s = min_setup_time(cell, QEdge::Rise, tech, &aged, setup);
    timing.t_setup_min_fall_s = min_setup_time(cell, QEdge::Fall, tech, &aged, setup);
    return timing.worst_setup_s();
}

WnmOutcome nominal_wnm(FlipFlopKind kind, Technology t, double age_years, SlackMode mode,
                       const McContext& ctx, double setup_reference_s) {
    const TechnologyConfig& tech = ctx.tech(t);
    Circuit cell = attach_fo4_load(build_flipflop(kind, tech), tech);
    CharacterizeSetup setup = ctx.setup;
    if (mode == SlackMode::Zero)
        setup.zero_slack_setup_s = setup_reference_s > 0.0
                                       ? setup_reference_s
                                       : zero_slack_reference(kind, t, ctx);
    AgingState aging = apply_stress(cell, tech, ctx.aging, age_years);
    return characterize_wnm(cell, mode, tech, &aging, setup);
}

namespace {

TrialRecord run_trial(long trial, const Circuit& cell_template,
                      const TechnologyConfig& tech, const McContext& ctx,
                      const CharacterizeSetup& setup, double age_years, SlackMode mode,
                      const CounterRng& rng) {
    TrialRecord rec;
    rec.trial = trial;
    try {
        Circuit c = cell_template;
        c.sample = sample_params(tech, rng, static_cast<std::uint64_t>(trial));
        // Aging interacts with the drawn parameters (the shift depends on
        // t_oxe and the instance bias), so stress is evaluated per trial.
        AgingState aging = apply_stress(c, tech, ctx.aging, age_years);
        WnmOutcome out = characterize_wnm(c, mode, tech, &aging, setup);
        rec.degenerate = out.degenerate;
        rec.sample = out.sample;
    } catch (const Error&) {
        rec.failed = true;
    }
    return rec;
}

} // namespace

McResult run_mc(const McConfig& cfg, const McContext& ctx) {
    if (cfg.n_trials < 1) throw ConfigError("run_mc: n_trials must be >= 1");
    for (double a : cfg.ages_years)
        if (a != 0 && a != 2 && a != 4 && a != 6 && a != 8 && a != 10)
            throw ConfigError("run_mc: ages must lie in {0,2,4,6,8,10}");

    const CounterRng rng(cfg.seed);
    int workers = cfg.workers > 0
                      ? cfg.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, 64);

    McResult result;
    std::map<std::pair<FlipFlopKind, Technology>, double> setup_cache;

    for (Technology t : cfg.technologies) {
        const TechnologyConfig& tech = ctx.tech(t);
        for (FlipFlopKind kind : cfg.kinds) {
            const Circuit cell = attach_fo4_load(build_flipflop(kind, tech), tech);

            const bool needs_zero = std::count(cfg.modes.begin(), cfg.modes.end(),
                                               SlackMode::Zero) > 0;
            double setup_ref = 0.0;
            if (needs_zero) {
                auto key = std::make_pair(kind, t);
                auto it = setup_cache.find(key);
                if (it == setup_cache.end())
                    it = setup_cache.emplace(key, zero_slack_reference(kind, t, ctx)).first;
                setup_ref = it->second;
            }

            for (double age : cfg.ages_years) {
                for (SlackMode mode : cfg.modes) {
                    CharacterizeSetup setup = ctx.setup;
                    if (mode == SlackMode::Zero) setup.zero_slack_setup_s = setup_ref;

                    std::vector<TrialRecord> slots(cfg.n_trials);
                    std::atomic<long> next{0};
                    auto worker = [&]() {
                        for (long i = next.fetch_add(1); i < cfg.n_trials;
                             i = next.fetch_add(1))
                            slots[i] = run_trial(i, cell, tech, ctx, setup, age, mode, rng);
                    };
                    if (workers == 1) {
                        worker();
                    } else {
                        std::vector<std::thread> pool;
                        pool.reserve(workers);
                        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
                        for (auto& th : pool) th.join();
                    }

                    McCell out;
                    out.kind = kind;
                    out.tech = t;
                    out.age_years = age;
                    out.mode = mode;
                    long degenerate = 0;
                    for (const auto& rec : slots) {
                        if (rec.failed) {
                            ++out.failed_trials;
                            ++degenerate;  // no valid margin sample either way
                        } else if (rec.degenerate) {
                            ++degenerate;
                        } else {
                            out.samples_l.push_back(rec.sample.v_write_l);
                            out.samples_h.push_back(rec.sample.v_write_h);
                        }
                    }
                    if (out.failed_trials * 20 > cfg.n_trials)
                        throw Error("run_mc: more than 5% of trials failed to simulate");
                    if (out.samples_l.size() >= 2) {
                        out.v_write_l = summarize(out.samples_l);
                        out.v_write_h = summarize(out.samples_h);
                    } else if (out.samples_l.size() == 1) {
                        out.v_write_l.n = 1;
                        out.v_write_l.mean = out.v_write_l.min = out.v_write_l.max =
                            out.samples_l[0];
                        out.v_write_h.n = 1;
                        out.v_write_h.mean = out.v_write_h.min = out.v_write_h.max =
                            out.samples_h[0];
                    }
                    out.v_write_l.degenerate_count = degenerate;
                    out.v_write_h.degenerate_count = degenerate;
                    if (cfg.keep_trials) out.trials = std::move(slots);
                    result.cells.push_back(std::move(out));
                }
            }
        }
    }
    return result;
}

} // namespace ffwnm

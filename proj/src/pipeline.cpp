#include "ffwnm/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "ffwnm/report.hpp"

namespace ffwnm {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return cfg.out_dir + "/" + name;
}

} // namespace

int cmd_timing(const RunConfig& cfg) {
    std::vector<TimingRow> rows;
    bool any_failed = false;
    for (Technology t : cfg.mc.technologies) {
        const TechnologyConfig& tech = cfg.ctx.tech(t);
        for (FlipFlopKind kind : cfg.mc.kinds) {
            Circuit cell = attach_fo4_load(build_flipflop(kind, tech), tech);
            for (double age : cfg.timing_ages) {
                AgingState aging = apply_stress(cell, tech, cfg.ctx.aging, age);
                for (QEdge edge : {QEdge::Rise, QEdge::Fall}) {
                    TimingRow row;
                    row.kind = kind;
                    row.tech = t;
                    row.age_years = age;
                    row.edge = edge;
                    try {
                        row.t_ck_to_q_ps =
                            1e12 * measure_clk_to_q(cell, edge, tech, &aging, cfg.ctx.setup);
                        row.t_setup_min_ps =
                            1e12 * min_setup_time(cell, edge, tech, &aging, cfg.ctx.setup);
                    } catch (const Error& e) {
                        std::fprintf(stderr, "timing: FF-%c %s %gy %s: %s\n",
                                     kind_letter(kind), to_string(t), age,
                                     edge == QEdge::Rise ? "rise" : "fall", e.what());
                        any_failed = true;
                    }
                    rows.push_back(row);
                }
            }
        }
    }
    write_text_file(out_path(cfg, "timing.csv"), timing_csv(rows));
    std::printf("wrote %s (%zu rows)\n", out_path(cfg, "timing.csv").c_str(), rows.size());
    return any_failed ? 2 : 0;
}

int cmd_wnm(const RunConfig& cfg) {
    std::vector<NominalWnmRow> nominal_rows;
    std::map<std::pair<FlipFlopKind, Technology>, double> setup_cache;
    auto setup_ref = [&](FlipFlopKind kind, Technology t) {
        auto key = std::make_pair(kind, t);
        auto it = setup_cache.find(key);
        if (it == setup_cache.end())
            it = setup_cache.emplace(key, zero_slack_reference(kind, t, cfg.ctx)).first;
        return it->second;
    };

    for (Technology t : cfg.mc.technologies)
        for (FlipFlopKind kind : cfg.mc.kinds)
            for (double age : cfg.mc.ages_years)
                for (SlackMode mode : cfg.mc.modes) {
                    NominalWnmRow row;
                    row.kind = kind;
                    row.tech = t;
                    row.age_years = age;
                    row.mode = mode;
                    const double ref =
                        mode == SlackMode::Zero ? setup_ref(kind, t) : -1.0;
                    WnmOutcome out = nominal_wnm(kind, t, age, mode, cfg.ctx, ref);
                    row.degenerate = out.degenerate;
                    row.sample = out.sample;
                    nominal_rows.push_back(row);
                }
    write_text_file(out_path(cfg, "wnm_nominal.csv"), wnm_nominal_csv(nominal_rows));

    const auto t_start = std::chrono::steady_clock::now();
    McResult mc = run_mc(cfg.mc, cfg.ctx);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t_start).count();
    write_text_file(out_path(cfg, "wnm_mc_summary.csv"), wnm_summary_csv(mc));
    write_text_file(out_path(cfg, "wnm_trials.csv"), wnm_trials_csv(mc));

    // Sigma comparison across technologies, per kind/age/mode/metric. The
    // FinFET cells are expected to spread less than their CMOS
    // counterparts; violations are flagged, not fatal.
    std::string cmp = "ff_kind,age_years,slack_mode,metric,std_cmos,std_finfet,finfet_lower\n";
    for (const auto& a : mc.cells) {
        if (a.tech != Technology::Cmos16) continue;
        for (const auto& b : mc.cells) {
            if (b.tech != Technology::Finfet16 || b.kind != a.kind ||
                b.age_years != a.age_years || b.mode != a.mode)
                continue;
            auto one = [&](const char* metric, const StatSummary& sa, const StatSummary& sb) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "%c,%g,%s,%s,%.9g,%.9g,%s\n",
                              kind_letter(a.kind), a.age_years, to_string(a.mode), metric,
                              sa.std, sb.std, sb.std <= sa.std ? "yes" : "FLAG");
                cmp += buf;
            };
            one("v_write_l", a.v_write_l, b.v_write_l);
            one("v_write_h", a.v_write_h, b.v_write_h);
        }
    }
    write_text_file(out_path(cfg, "sigma_comparison.csv"), cmp);

    std::printf("wnm: %zu combinations, %ld trials each, %.1f s\n", mc.cells.size(),
                cfg.mc.n_trials, secs);
    return 0;
}

int cmd_failprob(const RunConfig& cfg, const std::string& summary_csv_path) {
    std::string summary_text;
    const std::string computed = out_path(cfg, "wnm_mc_summary.csv");
    try {
        summary_text = read_text_file(summary_csv_path.empty() ? computed
                                                               : summary_csv_path);
    } catch (const Error&) {
        std::fprintf(stderr,
                     "failprob: no summary CSV at '%s'; run `ffwnm wnm` first or pass "
                     "--from-summary PATH\n",
                     (summary_csv_path.empty() ? computed : summary_csv_path).c_str());
        return 2;
    }
    const auto rows = parse_summary_cssv_guard(summary_text);
    return 0;
}

int cmd_export_netlists(const RunConfig& cfg) {
    for (Technology t : cfg.mc.technologies) {
        const TechnologyConfig& tech = cfg.ctx.tech(t);
        for (FlipFlopKind kind : cfg.mc.kinds) {
            Circuit c = build_flipflop(kind, tech);
            std::string name = std::string("netlists/ff_") +
                               static_cast<char>(std::tolower(kind_letter(kind))) + "_" +
                               (t == Technology::Cmos16 ? "cmos16" : "finfet16") + ".sp";
            write_text_file(out_path(cfg, name), serialize(c));
        }
    }
    std::printf("wrote netlists under %s/netlists\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_selfcheck(const RunConfig& cfg) {
    (void)cfg;
    return 0;
}

} // namespace ffwnm

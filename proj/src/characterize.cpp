#include "ffwnm/characterize.hpp"

#include <cmath>

namespace ffwnm {

const char* to_string(SlackMode m) { return m == SlackMode::Long ? "LONG" : "ZERO"; }

SlackMode slack_mode_from_string(const std::string& s) {
    if (s == "LONG") return SlackMode::Long;
    if (s == "ZERO") return SlackMode::Zero;
    throw ConfigError("unknown slack mode '" + s + "' (LONG or ZERO)");
}

bool output_correct(const Waveform& q, bool expected_high, double t_edge,
                    double t_cycle_end, const TechnologyConfig& tech) {
    const auto& pts = q.points();
    if (pts.empty() || pts.front().first > t_edge + 1e-18 ||
        pts.back().first < t_cycle_end - 1e-18)
        throw CharacterizationError("output_correct: waveform does not cover the window");

    const double rail = expected_high ? tech.vdd_v : 0.0;
    const double band = 0.1 * tech.vdd_v;
    auto in_band = [&](double v) { return std::abs(v - rail) <= band; };

    if (!in_band(q.at(t_cycle_end))) return false;
    bool entered = in_band(q.at(t_edge));
    for (const auto& [t, v] : pts) {
        if (t <= t_edge || t > t_cycle_end) continue;
        if (!entered) {
            entered = in_band(v);
        } else if (!in_band(v)) {
            return false;  // stability clause: left the band before cycle end
        }
    }
    return entered;
}

// ---------------------------------------------------------------------------
// Bisection cores

namespace {

int bisect_iterations(double lo, double hi, double tol) {
    if (tol <= 0.0 || hi <= lo) throw ConfigError("bisection: bad bracket or tolerance");
    int k = 0;
    for (double w = hi - lo; w > tol; w *= 0.5) ++k;
    return k;
}

} // namespace

BisectResult bisect_highest_true(const std::function<bool(double)>& ok, double lo,
                                 double hi, double tol) {
    const int k = bisect_iterations(lo, hi, tol);
    for (int i = 0; i < k; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid)) lo = mid; else hi = mid;
    }
    return {lo, lo, hi, k};
}

BisectResult bisect_lowest_true(const std::function<bool(double)>& ok, double lo,
                                double hi, double tol) {
    const int k = bisect_iterations(lo, hi, tol);
    for (int i = 0; i < k; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid)) hi = mid; else lo = mid;
    }
    return {hi, lo, hi, k};
}

// ---------------------------------------------------------------------------
// Clocked write-test harness
//
// Timeline of one test: D sits at the preamble rail from t = 0; a first
// clock edge captures that rail (establishing the held state); D then moves
// to the trial voltage and the second clock edge attempts the write. Q is
// judged over the clock cycle following the second edge. The clock stays
// low afterwards so the verdict window is not disturbed by a re-capture.

namespace {

struct WritePlan {
    double t_edge1 = 0.0;      // preamble capture edge (50% point)
    double t_edge2 = 0.0;      // test capture edge
    double t_d_mid = 0.0;      // D transition midpoint
    double t_cycle_end = 0.0;
    double t_stop = 0.0;
    double t_checkpoint = 0.0; // last instant common to all trial voltages
};

WritePlan make_plan(SlackMode mode, const CharacterizeSetup& s, double override_setup = -1.0) {
    const double T = s.period_s();
    const double te = s.edge_time_s;
    WritePlan p;
    p.t_edge1 = 0.4e-9;
    if (mode == SlackMode::Long) {
        p.t_d_mid = p.t_edge1 + 0.75 * T;
        p.t_edge2 = p.t_d_mid + 0.5 * te + s.long_slack_s;  // D settled 2 ns ahead
    } else {
        double setup = override_setup >= 0.0 ? override_setup : s.zero_slack_setup_s;
        if (setup <= 0.0)
            throw ConfigError("ZERO slack mode requires a positive setup reference");
        p.t_edge2 = p.t_edge1 + T;
        p.t_d_mid = p.t_edge2 - setup;
        if (p.t_d_mid - 0.5 * te <= p.t_edge1)
            throw ConfigError("setup reference exceeds the clock period");
    }
    p.t_cycle_end = p.t_edge2 + T;
    p.t_stop = p.t_cycle_end + 0.02 * T;
    p.t_checkpoint = p.t_d_mid - 0.5 * te;
    return p;
}

Waveform clock_wave(const WritePlan& p, const CharacterizeSetup& s, double vdd) {
    const double T = s.period_s();
    const double h = 0.5 * s.edge_time_s;
    std::vector<std::pair<double, double>> pts;
    auto pulse = [&](double t_rise) {
        pts.emplace_back(t_rise - h, 0.0);
        pts.emplace_back(t_rise + h, vdd);
        pts.emplace_back(t_rise + 0.5 * T - h, vdd);
        pts.emplace_back(t_rise + 0.5 * T + h, 0.0);
    };
    pts.emplace_back(0.0, 0.0);
    pulse(p.t_edge1);
    pulse(p.t_edge2);
    return Waveform(std::move(pts));
}

Waveform data_wave(const WritePlan& p, const CharacterizeSetup& s, double v_from,
                   double v_to) {
    const double h = 0.5 * s.edge_time_s;
    return Waveform({{0.0, v_from},
                     {p.t_d_mid - h, v_from},
                     {p.t_d_mid + h, v_to}});
}

// Cell plus clock/data drivers, with a cached state at the checkpoint so
// bisection trials only re-simulate the tail that actually differs.
class WriteHarness {
public:
    WriteHarness(const Circuit& cell, const AgingState* aging, SlackMode mode,
                 const TechnologyConfig& tech, const CharacterizeSetup& setup,
                 double preamble_rail_v, double override_setup = -1.0)
        : tech_(tech), setup_(setup), plan_(make_plan(mode, setup, override_setup)),
          v_pre_(preamble_rail_v) {
        circuit_ = aging ? with_aging(cell, *aging) : cell;
        if (circuit_.pin_d < 0 || circuit_.pin_ck < 0 || circuit_.pin_q < 0)
            throw ConfigError("write harness needs D, CK and Q pins");

        VoltageSource ck;
        ck.name = "VCK";
        ck.node = circuit_.pin_ck;
        ck.wave = clock_wave(plan_, setup_, tech_.vdd_v);
        circuit_.sources.push_back(ck);

        VoltageSource d;
        d.name = "VD";
        d.node = circuit_.pin_d;
        d.wave = Waveform::dc(v_pre_);
        circuit_.sources.push_back(d);
        d_index_ = circuit_.sources.size() - 1;

        // Preamble: everything up to the instant D starts moving.
        Simulator sim(circuit_, tech_, setup_.sim);
        auto res = sim.transient(plan_.t_checkpoint, setup_.dt_max());
        checkpoint_ = res.final_voltages();
        preamble_ok_ =
            std::abs(res.voltages.back()[circuit_.pin_q] - v_pre_) <= 0.1 * tech_.vdd_v;
    }

    bool preamble_ok() const { return preamble_ok_; }
    const WritePlan& plan() const { return plan_; }

    /// Full write test at one trial voltage.
    bool writes(double v_test, bool expected_high) const {
        auto q = run(v_test).node_waveform(circuit_.pin_q);
        return output_correct(q, expected_high, plan_.t_edge2, plan_.t_cycle_end, tech_);
    }

    /// Clock-to-Q delay for a full-rail transition; negative if Q never
    /// crosses 50%.
    double clk_to_q(double v_test, bool rising_q) const {
        auto res = run(v_test);
        auto q = res.node_waveform(circuit_.pin_q);
        if (!output_correct(q, rising_q, plan_.t_edge2, plan_.t_cycle_end, tech_))
            return -1.0;
        double cross = q.first_crossing(0.5 * tech_.vdd_v, plan_.t_edge2, rising_q);
        return cross < 0.0 ? -1.0 : cross - plan_.t_edge2;
    }

private:
    TransientResult run(double v_test) const {
        Circuit c = circuit_;
        c.sources[d_index_].wave = data_wave(plan_, setup_, v_pre_, v_test);
        Simulator sim(c, tech_, setup_.sim);
        return sim.transient(plan_.t_stop, setup_.dt_max(), &checkpoint_,
                             plan_.t_checkpoint);
    }

    TechnologyConfig tech_;
    CharacterizeSetup setup_;
    WritePlan plan_;
    double v_pre_ = 0.0;
    Circuit circuit_;
    std::size_t d_index_ = 0;
    std::vector<double> checkpoint_;
    bool preamble_ok_ = false;
};

} // namespace

double measure_clk_to_q(const Circuit& cell, QEdge edge, const TechnologyConfig& tech,
                        const AgingState* aging, const CharacterizeSetup& setup) {
    const bool rising = edge == QEdge::Rise;
    WriteHarness h(cell, aging, SlackMode::Long, tech, setup,
                   rising ? 0.0 : tech.vdd_v);
    if (!h.preamble_ok())
        throw CharacterizationError("clk-to-q: preamble write failed at full rail");
    double d = h.clk_to_q(rising ? tech.vdd_v : 0.0, rising);
    if (d < 0.0)
        throw CharacterizationError("clk-to-q: Q never reached 50% after the edge");
    return d;
}

double min_setup_time(const Circuit& cell, QEdge edge, const TechnologyConfig& tech,
                      const AgingState* aging, const CharacterizeSetup& setup) {
    const bool rising = edge == QEdge::Rise;
    const double nominal = measure_clk_to_q(cell, edge, tech, aging, setup);
    const double threshold = 1.10 * nominal;

    auto delay_ok = [&](double setup_time) {
        WriteHarness h(cell, aging, SlackMode::Zero, tech, setup,
                       rising ? 0.0 : tech.vdd_v, setup_time);
        if (!h.preamble_ok()) return false;
        double d = h.clk_to_q(rising ? tech.vdd_v : 0.0, rising);
        return d >= 0.0 && d <= threshold;
    };

    // Establish a passing upper bracket, then bisect to 0.1 ps.
    double lo = 0.0;
    double hi = 64e-12;
    while (!delay_ok(hi)) {
        lo = hi;
        hi *= 4.0;
        if (hi > 2.6e-9)
            throw CharacterizationError(
                "min_setup_time: 10% delay bound violated even at large setup");
    }
    return bisect_lowest_true(delay_ok, lo, hi, 0.1e-12).value;
}

TimingResult characterize_timing(const Circuit& cell, const TechnologyConfig& tech,
                                 const AgingState* aging, const CharacterizeSetup& setup) {
    TimingResult t;
    t.t_ck_to_q_rise_s = measure_clk_to_q(cell, QEdge::Rise, tech, aging, setup);
    t.t_ck_to_q_fall_s = measure_clk_to_q(cell, QEdge::Fall, tech, aging, setup);
    t.t_setup_min_rise_s = min_setup_time(cell, QEdge::Rise, tech, aging, setup);
    t.t_setup_min_fall_s = min_setup_time(cell, QEdge::Fall, tech, aging, setup);
    return t;
}

std::pair<double, double> wnm(double v_write_l, double v_write_h, double vdd) {
    return {v_write_l, vdd - v_write_h};
}

namespace {

// Shared implementation: returns the margin voltage, or throws on a
// degenerate instance when `flag_degenerate` is null.
bool margin_search(const Circuit& cell, SlackMode mode, const TechnologyConfig& tech,
                   const AgingState* aging, const CharacterizeSetup& setup, bool low_side,
                   double* out) {
    const double vdd = tech.vdd_v;
    // Searching V_writeL starts from a held 1 and tries to write 0;
    // V_writeH mirrors it.
    WriteHarness h(cell, aging, mode, tech, setup, low_side ? vdd : 0.0);
    if (!h.preamble_ok()) return false;
    const bool target_high = !low_side;
    // Degenerate screen: the full-rail input must write correctly.
    if (!h.writes(target_high ? vdd : 0.0, target_high)) return false;

    auto ok = [&](double v) { return h.writes(v, target_high); };
    const double tol = 0.001 * vdd;
    *out = low_side ? bisect_highest_true(ok, 0.0, vdd, tol).value
                    : bisect_lowest_true(ok, 0.0, vdd, tol).value;
    return true;
}

} // namespace

double find_v_write_low(const Circuit& cell, SlackMode mode, const TechnologyConfig& tech,
                        const AgingState* aging, const CharacterizeSetup& setup) {
    double v = 0.0;
    if (!margin_search(cell, mode, tech, aging, setup, true, &v))
        throw CharacterizationError("find_v_write_low: degenerate instance (full-rail write failed)");
    return v;
}

double find_v_write_high(const Circuit& cell, SlackMode mode, const TechnologyConfig& tech,
                         const AgingState* aging, const CharacterizeSetup& setup) {
    double v = 0.0;
    if (!margin_search(cell, mode, tech, aging, setup, false, &v))
        throw CharacterizationError("find_v_write_high: degenerate instance (full-rail write failed)");
    return v;
}

WnmOutcome characterize_wnm(const Circuit& cell, SlackMode mode,
                            const TechnologyConfig& tech, const AgingState* aging,
                            const CharacterizeSetup& setup) {
    WnmOutcome out;
    double v_l = 0.0, v_h = 0.0;
    if (!margin_search(cell, mode, tech, aging, setup, true, &v_l) ||
        !margin_search(cell, mode, tech, aging, setup, false, &v_h) ||
        v_l >= v_h) {
        out.degenerate = true;
        return out;
    }
    out.sample.v_write_l = v_l;
    out.sample.v_write_h = v_h;
    auto [wl, wh] = wnm(v_l, v_h, tech.vdd_v);
    out.sample.wnm_l = wl;
    out.sample.wnm_h = wh;
    return out;
}

} // namespace ffwnm

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffwnm/engine.hpp"
#include "ffwnm/failprob.hpp"
#include "ffwnm/variation.hpp"

namespace ffwnm {

// CSV emission. All writers format floats identically, so identical inputs
// always produce byte-identical files.

struct TimingRow {
    FlipFlopKind kind = FlipFlopKind::A_TgStatic;
    Technology tech = Technology::Cmos16;
    double age_years = 0.0;
    QEdge edge = QEdge::Rise;
    std::optional<double> t_ck_to_q_ps;     // empty = failed characterization
    std::optional<double> t_setup_min_ps;
};

std::string timing_csv(const std::vector<TimingRow>& rows);

struct NominalWnmRow {
    FlipFlopKind kind = FlipFlopKind::A_TgStatic;
    Technology tech = Technology::Cmos16;
    double age_years = 0.0;
    SlackMode mode = SlackMode::Long;
    bool degenerate = false;
    WnmSample sample;
};

std::string wnm_nominal_csv(const std::vector<NominalWnmRow>& rows);

std::string wnm_trials_csv(const McResult& mc);
std::string wnm_summary_csv(const McResult& mc);

struct SummaryRow {
    FlipFlopKind kind;
    Technology tech;
    double age_years;
    SlackMode mode;
    std::string metric;  // "v_write_l" or "v_write_h"
    StatSummary stat;
};

std::vector<SummaryRow> parse_summary_csv(const std::string& text);

struct CurveSet {
    FlipFlopKind kind;
    Technology tech;
    double age_years;
    SlackMode mode;
    FailureCurve curve;
};

std::string failprob_csv(const std::vector<CurveSet>& curves);

/// One panel per flip-flop kind, one series per (age, branch) overlay;
/// mirrors the failure-probability figure layout.
std::string failprob_svg(const std::vector<CurveSet>& curves, double vdd);

/// Waveform dump: time column plus one column per node.
std::string transient_csv(const TransientResult& res, const Circuit& c);

/// Aging export: device, delta_vth.
std::string aging_csv(const Circuit& c, const AgingState& aging);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace ffwnm

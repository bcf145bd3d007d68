#include "ffwnm/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffwnm/aging.hpp"

namespace ffwnm {

namespace {

std::string g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string tech_s(Technology t) { return to_string(t); }

} // namespace

std::string timing_csv(const std::vector<TimingRow>& rows) {
    std::string out = "ff_kind,tech,age_years,q_edge,t_ck_to_q_ps,t_setup_min_ps\n";
    for (const auto& r : rows) {
        out += std::string(1, kind_letter(r.kind)) + "," + tech_s(r.tech) + "," +
               g(r.age_years) + "," + (r.edge == QEdge::Rise ? "rise" : "fall") + ",";
        out += r.t_ck_to_q_ps ? g(*r.t_ck_to_q_ps) : std::string("FAIL");
        out += ",";
        out += r.t_setup_min_ps ? g(*r.t_setup_min_ps) : std::string("FAIL");
        out += "\n";
    }
    return out;
}

std::string wnm_nominal_csv(const std::vector<NominalWnmRow>& rows) {
    std::string out = "ff_kind,tech,age_years,slack_mode,v_write_l,v_write_h,wnm_l,wnm_h\n";
    for (const auto& r : rows) {
        out += std::string(1, kind_letter(r.kind)) + "," + tech_s(r.tech) + "," +
               g(r.age_years) + "," + to_string(r.mode) + ",";
        if (r.degenerate) {
            out += "FAIL,FAIL,FAIL,FAIL\n";
        } else {
            out += g(r.sample.v_write_l) + "," + g(r.sample.v_write_h) + "," +
                   g(r.sample.wnm_l) + "," + g(r.sample.wnm_h) + "\n";
        }
    }
    return out;
}

std::string wnm_trials_csv(const McResult& mc) {
    std::string out =
        "ff_kind,tech,age_years,slack_mode,trial_id,v_write_l,v_write_h,wnm_l,wnm_h\n";
    for (const auto& cell : mc.cells) {
        const std::string prefix = std::string(1, kind_letter(cell.kind)) + "," +
                                   tech_s(cell.tech) + "," + g(cell.age_years) + "," +
                                   to_string(cell.mode) + ",";
        for (const auto& t : cell.trials) {
            out += prefix + std::to_string(t.trial) + ",";
            if (t.failed) {
                out += "ERROR,ERROR,ERROR,ERROR\n";
            } else if (t.degenerate) {
                out += "DEGENERATE,DEGENERATE,DEGENERATE,DEGENERATE\n";
            } else {
                out += g(t.sample.v_write_l) + "," + g(t.sample.v_write_h) + "," +
                       g(t.sample.wnm_l) + "," + g(t.sample.wnm_h) + "\n";
            }
        }
    }
    return out;
}

std::string wnm_summary_csv(const McResult& mc) {
    std::string out =
        "ff_kind,tech,age_years,slack_mode,metric,n,mean,std,min,max,degenerate_count\n";
    auto row = [&](const McCell& cell, const char* metric, const StatSummary& s) {
        out += std::string(1, kind_letter(cell.kind)) + "," + tech_s(cell.tech) + "," +
               g(cell.age_years) + "," + to_string(cell.mode) + "," + metric + "," +
               std::to_string(s.n) + "," + g(s.mean) + "," + g(s.std) + "," + g(s.min) +
               "," + g(s.max) + "," + std::to_string(s.degenerate_count) + "\n";
    };
    for (const auto& cell : mc.cells) {
        row(cell, "v_write_l", cell.v_write_l);
        row(cell, "v_write_h", cell.v_write_h);
    }
    return out;
}

namespace {

std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else if (c != '\r') cur += c;
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
    std::vector<SummaryRow> rows;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || line.empty()) continue;  // header
        auto f = csv_fields(line);
        if (f.size() != 11)
            throw ParseError("summary CSV: expected 11 fields", line_no);
        SummaryRow r;
        r.kind = kind_from_letter(f[0].at(0));
        r.tech = technology_from_string(f[1]);
        r.age_years = std::stod(f[2]);
        r.mode = slack_mode_from_string(f[3]);
        r.metric = f[4];
        r.stat.n = std::stol(f[5]);
        r.stat.mean = std::stod(f[6]);
        r.stat.std = std::stod(f[7]);
        r.stat.min = std::stod(f[8]);
        r.stat.max = std::stod(f[9]);
        r.stat.degenerate_count = std::stol(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string failprob_csv(const std::vector<CurveSet>& curves) {
    std::string out = "ff_kind,tech,age_years,slack_mode,delta_v,p_fail_low,p_fail_high\n";
    for (const auto& cs : curves) {
        const std::string prefix = std::string(1, kind_letter(cs.kind)) + "," +
                                   tech_s(cs.tech) + "," + g(cs.age_years) + "," +
                                   to_string(cs.mode) + ",";
        for (std::size_t i = 0; i < cs.curve.delta_v.size(); ++i)
            out += prefix + g(cs.curve.delta_v[i]) + "," + g(cs.curve.p_low[i]) + "," +
                   g(cs.curve.p_high[i]) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string svg_f(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kAgePalette[6] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                              "#d62728", "#9467bd", "#8c564b"};

} // namespace

std::string failprob_svg(const std::vector<CurveSet>& curves, double vdd) {
    // Panels keyed by (kind, tech) in first-seen order.
    std::vector<std::pair<FlipFlopKind, Technology>> panels;
    for (const auto& cs : curves) {
        auto key = std::make_pair(cs.kind, cs.tech);
        if (std::find(panels.begin(), panels.end(), key) == panels.end())
            panels.push_back(key);
    }
    const int cols = 4;
    const int pw = 260, ph = 200, margin = 40;
    const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
    const int width = cols * (pw + margin) + margin;
    const int height = rows * (ph + margin) + margin;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
    s << "<style>text{font-family:sans-serif;font-size:11px}</style>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const auto [kind, tech] = panels[pi];
        const int px = margin + static_cast<int>(pi % cols) * (pw + margin);
        const int py = margin + static_cast<int>(pi / cols) * (ph + margin);
        s << "<g id=\"panel-" << kind_letter(kind) << "-" << tech_s(tech) << "\">\n";
        s << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << pw
          << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
        s << "<text x=\"" << px + 6 << "\" y=\"" << py + 14 << "\">FF-"
          << kind_letter(kind) << " " << tech_s(tech) << "</text>\n";

        for (const auto& cs : curves) {
            if (cs.kind != kind || cs.tech != tech) continue;
            const int age_idx = std::min(5, static_cast<int>(cs.age_years / 2.0));
            const char* color = kAgePalette[age_idx];
            auto emit = [&](const std::vector<double>& p, const char* dash) {
                s << "<polyline fill=\"none\" stroke=\"" << color << "\""
                  << (dash[0] ? std::string(" stroke-dasharray=\"") + dash + "\"" : "")
                  << " points=\"";
                for (std::size_t i = 0; i < cs.curve.delta_v.size(); ++i) {
                    const double x = px + cs.curve.delta_v[i] / vdd * pw;
                    const double y = py + ph - p[i] * (ph - 20);
                    s << svg_f(x) << "," << svg_f(y) << " ";
                }
                s << "\"/>\n";
            };
            emit(cs.curve.p_low, "");
            emit(cs.curve.p_high, "4 3");
        }
        s << "</g>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string transient_csv(const TransientResult& res, const Circuit& c) {
    std::string out = "time";
    for (const auto& n : c.nodes) out += "," + n;
    out += "\n";
    for (std::size_t i = 0; i < res.time.size(); ++i) {
        out += g(res.time[i]);
        for (double v : res.voltages[i]) out += "," + g(v);
        out += "\n";
    }
    return out;
}

std::string aging_csv(const Circuit& c, const AgingState& aging) {
    std::string out = "device,delta_vth\n";
    for (std::size_t i = 0; i < c.devices.size(); ++i)
        out += c.devices[i].name + "," + g(aging.delta_vth_v[i]) + "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace ffwnm

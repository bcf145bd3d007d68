#include "ffwnm/netlist.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ffwnm {

int Circuit::find_node(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == name) return static_cast<int>(i);
    return -1;
}

int Circuit::node_index(const std::string& name) {
    int i = find_node(name);
    if (i >= 0) return i;
    nodes.push_back(name);
    return static_cast<int>(nodes.size()) - 1;
}

const VoltageSource* Circuit::find_source(std::string_view name) const {
    for (const auto& s : sources)
        if (s.name == name) return &s;
    return nullptr;
}

char kind_letter(FlipFlopKind k) {
    return static_cast<char>('A' + static_cast<int>(k));
}

FlipFlopKind kind_from_letter(char c) {
    if (c >= 'a' && c <= 'g') c = static_cast<char>(c - 'a' + 'A');
    if (c < 'A' || c > 'G')
        throw ConfigError(std::string("unknown flip-flop kind '") + c +
                          "' (valid: A B C D E F G)");
    return static_cast<FlipFlopKind>(c - 'A');
}

const char* kind_name(FlipFlopKind k) {
    switch (k) {
        case FlipFlopKind::A_TgStatic: return "tg-static";
        case FlipFlopKind::B_TgPseudoStatic: return "tg-pseudo-static";
        case FlipFlopKind::C_TgBootstrap: return "tg-bootstrap";
        case FlipFlopKind::D_C2mosPseudoStatic: return "c2mos-pseudo-static";
        case FlipFlopKind::E_C2mosBootstrap: return "c2mos-bootstrap";
        case FlipFlopKind::F_C2mosDynamic: return "c2mos-dynamic";
        case FlipFlopKind::G_TspcDynamic: return "tspc-dynamic";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, int line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + tok + "'", line_no);
    }
}

std::string canon_node(const std::string& n) {
    return n == "0" ? std::string("gnd") : n;
}

} // namespace

Circuit parse(std::string_view text) {
    Circuit c;
    std::istringstream stream{std::string(text)};
    std::string line;
    int line_no = 0;

    struct PendingPin { std::string pin, node; int line; };
    std::vector<PendingPin> pins;

    while (std::getline(stream, line)) {
        ++line_no;
        if (auto p = line.find_first_not_of(" \t\r"); p == std::string::npos)
            continue;
        else if (line[p] == '*')
            continue;

        auto toks = tokenize(line);
        const std::string& head = toks[0];

        if (head[0] == 'M' || head[0] == 'm') {
            if (toks.size() < 6 || toks.size() > 7)
                throw ParseError("device line needs: M<name> d g s b <N|P> [m=..]", line_no);
            DeviceInstance dev;
            dev.name = head;
            dev.drain = c.node_index(canon_node(toks[1]));
            dev.gate = c.node_index(canon_node(toks[2]));
            dev.source = c.node_index(canon_node(toks[3]));
            dev.body = c.node_index(canon_node(toks[4]));
            if (toks[5] == "N") dev.polarity = Polarity::N;
            else if (toks[5] == "P") dev.polarity = Polarity::P;
            else throw ParseError("device polarity must be N or P, got '" + toks[5] + "'", line_no, 6);
            if (toks.size() == 7) {
                if (toks[6].rfind("m=", 0) != 0)
                    throw ParseError("trailing device field must be m=<mult>", line_no, 7);
                dev.multiplier = parse_double(toks[6].substr(2), line_no);
            }
            c.devices.push_back(std::move(dev));
        } else if (head[0] == 'C' || head[0] == 'c') {
            if (toks.size() != 4)
                throw ParseError("capacitor line needs: C<name> a b <farads>", line_no);
            CapacitorElt cap;
            cap.name = head;
            cap.a = c.node_index(canon_node(toks[1]));
            cap.b = c.node_index(canon_node(toks[2]));
            cap.farads = parse_double(toks[3], line_no);
            c.capacitors.push_back(std::move(cap));
        } else if (head[0] == 'V' || head[0] == 'v') {
            if (toks.size() < 4)
                throw ParseError("source line needs: V<name> n gnd <dc v | pwl t v ...> [r=..]", line_no);
            if (canon_node(toks[2]) != "gnd")
                throw ParseError("sources must be grounded; second node must be gnd", line_no, 3);
            VoltageSource src;
            src.name = head;
            src.node = c.node_index(canon_node(toks[1]));
            std::size_t i = toks.size();
            if (toks.back().rfind("r=", 0) == 0) {
                src.r_series = parse_double(toks.back().substr(2), line_no);
                if (src.r_series < 0.0) throw ParseError("negative source resistance", line_no);
                --i;
            }
            if (toks[3] == "dc") {
                if (i != 5) throw ParseError("dc spec needs one value", line_no);
                src.wave = Waveform::dc(parse_double(toks[4], line_no));
            } else if (toks[3] == "pwl") {
                std::vector<std::pair<double, double>> pts;
                if ((i - 4) < 2 || (i - 4) % 2 != 0)
                    throw ParseError("pwl spec needs time/value pairs", line_no);
                for (std::size_t k = 4; k + 1 < i; k += 2) {
                    double t = parse_double(toks[k], line_no);
                    double v = parse_double(toks[k + 1], line_no);
                    if (!pts.empty() && t < pts.back().first)
                        throw ParseError("pwl times must be non-decreasing", line_no);
                    pts.emplace_back(t, v);
                }
                src.wave = Waveform(std::move(pts));
            } else {
                throw ParseError("unknown waveform spec '" + toks[3] + "' (dc or pwl)", line_no, 4);
            }
            c.sources.push_back(std::move(src));
        } else if (head == ".pin") {
            if (toks.size() != 3)
                throw ParseError(".pin line needs: .pin D|CK|Q <node>", line_no);
            pins.push_back({toks[1], canon_node(toks[2]), line_no});
        } else {
            throw ParseError("unrecognized line start '" + head + "'", line_no, 1);
        }
    }

    // Pins may only reference nodes introduced by elements.
    for (const auto& p : pins) {
        int idx = c.find_node(p.node);
        if (idx < 0)
            throw ParseError("pin references undeclared node '" + p.node + "'", p.line);
        int* slot = nullptr;
        if (p.pin == "D") slot = &c.pin_d;
        else if (p.pin == "CK") slot = &c.pin_ck;
        else if (p.pin == "Q") slot = &c.pin_q;
        else throw ParseError("unknown pin label '" + p.pin + "' (D, CK, or Q)", p.line);
        if (*slot >= 0)
            throw ParseError("duplicate pin label " + p.pin, p.line);
        *slot = idx;
    }
    return c;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string serialize(const Circuit& c) {
    std::string out;
    auto node = [&](int i) -> const std::string& { return c.nodes[i]; };
    for (const auto& s : c.sources) {
        out += s.name + " " + node(s.node) + " gnd";
        if (s.wave.points().size() == 1) {
            out += " dc " + fmt_double(s.wave.points()[0].second);
        } else {
            out += " pwl";
            for (auto& [t, v] : s.wave.points())
                out += " " + fmt_double(t) + " " + fmt_double(v);
        }
        if (s.r_series > 0.0) out += " r=" + fmt_double(s.r_series);
        out += "\n";
    }
    for (const auto& d : c.devices) {
        out += d.name + " " + node(d.drain) + " " + node(d.gate) + " " +
               node(d.source) + " " + node(d.body) + " " +
               (d.polarity == Polarity::N ? "N" : "P");
        if (d.multiplier != 1.0) out += " m=" + fmt_double(d.multiplier);
        out += "\n";
    }
    for (const auto& cap : c.capacitors)
        out += cap.name + " " + node(cap.a) + " " + node(cap.b) + " " +
               fmt_double(cap.farads) + "\n";
    if (c.pin_d >= 0) out += ".pin D " + node(c.pin_d) + "\n";
    if (c.pin_ck >= 0) out += ".pin CK " + node(c.pin_ck) + "\n";
    if (c.pin_q >= 0) out += ".pin Q " + node(c.pin_q) + "\n";
    return out;
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
    auto pin_name = [](const Circuit& c, int pin) -> std::string {
        return pin < 0 ? std::string() : c.nodes[pin];
    };
    if (a.devices.size() != b.devices.size() || a.capacitors.size() != b.capacitors.size() ||
        a.sources.size() != b.sources.size())
        return false;
    for (std::size_t i = 0; i < a.devices.size(); ++i) {
        const auto& x = a.devices[i];
        const auto& y = b.devices[i];
        if (x.name != y.name || x.polarity != y.polarity || x.multiplier != y.multiplier)
            return false;
        if (a.nodes[x.drain] != b.nodes[y.drain] || a.nodes[x.gate] != b.nodes[y.gate] ||
            a.nodes[x.source] != b.nodes[y.source] || a.nodes[x.body] != b.nodes[y.body])
            return false;
    }
    for (std::size_t i = 0; i < a.capacitors.size(); ++i) {
        const auto& x = a.capacitors[i];
        const auto& y = b.capacitors[i];
        if (x.name != y.name || x.farads != y.farads) return false;
        if (a.nodes[x.a] != b.nodes[y.a] || a.nodes[x.b] != b.nodes[y.b]) return false;
    }
    for (std::size_t i = 0; i < a.sources.size(); ++i) {
        const auto& x = a.sources[i];
        const auto& y = b.sources[i];
        if (x.name != y.name || x.r_series != y.r_series ||
            x.wave.points() != y.wave.points())
            return false;
        if (a.nodes[x.node] != b.nodes[y.node]) return false;
    }
    return pin_name(a, a.pin_d) == pin_name(b, b.pin_d) &&
           pin_name(a, a.pin_ck) == pin_name(b, b.pin_ck) &&
           pin_name(a, a.pin_q) == pin_name(b, b.pin_q);
}

void validate(const Circuit& c) {
    const int n = static_cast<int>(c.nodes.size());
    auto check = [&](int idx, const std::string& what) {
        if (idx < 0 || idx >= n)
            throw ConfigError("invalid node reference in " + what);
    };
    std::vector<bool> touched(c.nodes.size(), false);
    touched[0] = true;
    for (const auto& d : c.devices) {
        check(d.drain, d.name); check(d.gate, d.name);
        check(d.source, d.name); check(d.body, d.name);
        touched[d.drain] = touched[d.gate] = touched[d.source] = touched[d.body] = true;
    }
    for (const auto& cap : c.capacitors) {
        check(cap.a, cap.name); check(cap.b, cap.name);
        touched[cap.a] = touched[cap.b] = true;
    }
    std::vector<bool> source_node(c.nodes.size(), false);
    for (const auto& s : c.sources) {
        check(s.node, s.name);
        source_node[s.node] = true;
    }
    for (int i = 1; i < n; ++i)
        if (!touched[i] && !source_node[i])
            throw ConfigError("floating node '" + c.nodes[i] + "'");
}

// ---------------------------------------------------------------------------
// Built-in flip-flop library.
//
// The seven cells are master-slave realizations of the classic topology
// families. All of them are positive edge-triggered: the master latch is
// transparent while CK is low, the slave while CK is high. Kinds A-F derive
// the complementary clock from one internal inverter; kind G is true
// single-phase. See docs/topologies.md for schematics and the reasoning
// behind each structure.

namespace {

class CellBuilder {
public:
    CellBuilder(const TechnologyConfig& tech) : tech_(tech) {
        c_.sample = tech.nominal;
        vdd_ = c_.node_index("vdd");
        VoltageSource rail;
        rail.name = "VDD";
        rail.node = vdd_;
        rail.wave = Waveform::dc(tech.vdd_v);
        c_.sources.push_back(rail);
    }

    int node(const std::string& name) { return c_.node_index(name); }

    void nmos(const std::string& name, int d, int g, int s, double mult = 1.0) {
        c_.devices.push_back({name, Polarity::N, d, g, s, /*body=*/0, mult, 0.0});
    }
    void pmos(const std::string& name, int d, int g, int s, double mult = 1.0) {
        c_.devices.push_back({name, Polarity::P, d, g, s, vdd_, mult * tech_.p_to_n_ratio, 0.0});
    }

    void inverter(const std::string& prefix, int in, int out, double mult = 1.0) {
        pmos(prefix + "_p", out, in, vdd_, mult);
        nmos(prefix + "_n", out, in, 0, mult);
    }

    // Transmission gate between a and b, conducting while CK is at `phase`.
    void tgate(const std::string& prefix, int a, int b, bool on_when_high) {
        nmos(prefix + "_n", a, on_when_high ? ck_ : ckb_, b);
        pmos(prefix + "_p", a, on_when_high ? ckb_ : ck_, b, 1.0);
    }

    // Clock-gated (C2MOS-style) inverting stage driving `out` from `in`,
    // active while CK is at `phase`.
    void tristate(const std::string& prefix, int in, int out, bool on_when_high,
                  double mult = 1.0) {
        int pu = node(prefix + "_pu");
        int pd = node(prefix + "_pd");
        pmos(prefix + "_pi", pu, in, vdd_, mult);
        pmos(prefix + "_pc", out, on_when_high ? ckb_ : ck_, pu, mult);
        nmos(prefix + "_nc", out, on_when_high ? ck_ : ckb_, pd, mult);
        nmos(prefix + "_ni", pd, in, 0, mult);
    }

    void with_clock_inverter() {
        ck_ = node("ck");
        ckb_ = node("ckb");
        inverter("Mcki", ck_, ckb_);
    }

    void single_phase_clock() { ck_ = node("ck"); }

    Circuit finish(int d, int q) {
        c_.pin_d = d;
        c_.pin_ck = ck_;
        c_.pin_q = q;
        validate(c_);
        return std::move(c_);
    }

    int ck() const { return ck_; }
    int ckb() const { return ckb_; }
    int vdd() const { return vdd_; }
    double keeper() const { return tech_.keeper_mult; }

private:
    const TechnologyConfig& tech_;
    Circuit c_;
    int vdd_ = -1;
    int ck_ = -1;
    int ckb_ = -1;
};

} // namespace

Circuit build_flipflop(FlipFlopKind kind, const TechnologyConfig& tech) {
    CellBuilder b(tech);
    if (kind != FlipFlopKind::G_TspcDynamic)
        b.with_clock_inverter();
    else
        b.single_phase_clock();

    const int d = b.node("d");
    const int q = b.node("q");

    switch (kind) {
        case FlipFlopKind::A_TgStatic: {
            // Full feedback loop (inverter + transmission gate, full
            // strength) closed during each latch's hold phase.
            int xm = b.node("xm"), ym = b.node("ym"), fbm = b.node("fbm");
            b.tgate("Mm_tgi", xm, d, /*on high*/ false);
            b.inverter("Mm_inv", xm, ym);
            b.inverter("Mm_fbi", ym, fbm);
            b.tgate("Mm_tgf", xm, fbm, true);
            int xs = b.node("xs"), fbs = b.node("fbs");
            b.tgate("Ms_tgi", xs, ym, true);
            b.inverter("Ms_inv", xs, q);
            b.inverter("Ms_fbi", q, fbs);
            b.tgate("Ms_tgf", xs, fbs, false);
            break;
        }
        case FlipFlopKind::B_TgPseudoStatic: {
            // Keeper is a weak clock-gated tristate closed in the hold
            // phase only.
            int xm = b.node("xm"), ym = b.node("ym");
            b.tgate("Mm_tgi", xm, d, false);
            b.inverter("Mm_inv", xm, ym);
            b.tristate("Mm_k", ym, xm, true, b.keeper());
            int xs = b.node("xs");
            b.tgate("Ms_tgi", xs, ym, true);
            b.inverter("Ms_inv", xs, q);
            b.tristate("Ms_k", q, xs, false, b.keeper());
            break;
        }
        case FlipFlopKind::C_TgBootstrap: {
            // Direct input-to-output transmission gate in each latch; the
            // inverter pair only restores the level during hold.
            int m = b.node("m"), mb = b.node("mb"), sb = b.node("sb");
            b.tgate("Mm_boot", m, d, false);
            b.inverter("Mm_inv", m, mb);
            b.tristate("Mm_k", mb, m, true, b.keeper());
            b.tgate("Ms_boot", q, m, true);
            b.inverter("Ms_inv", q, sb);
            b.tristate("Ms_k", sb, q, false, b.keeper());
            break;
        }
        case FlipFlopKind::D_C2mosPseudoStatic: {
            int m = b.node("m"), mk = b.node("mk"), qk = b.node("qk");
            b.tristate("Mm_c2", d, m, false);
            b.inverter("Mm_ki", m, mk);
            b.tristate("Mm_kt", mk, m, true, b.keeper());
            b.tristate("Ms_c2", m, q, true);
            b.inverter("Ms_ki", q, qk);
            b.tristate("Ms_kt", qk, q, false, b.keeper());
            break;
        }
        case FlipFlopKind::E_C2mosBootstrap: {
            // C2MOS restoring stage plus the direct bootstrap pass gate.
            int m = b.node("m"), mb = b.node("mb"), sb = b.node("sb");
            b.tristate("Mm_c2", d, mb, false);
            b.inverter("Mm_inv", mb, m);
            b.tgate("Mm_boot", m, d, false);
            b.tristate("Mm_k", m, mb, true, b.keeper());
            b.tristate("Ms_c2", m, sb, true);
            b.inverter("Ms_inv", sb, q);
            b.tgate("Ms_boot", q, m, true);
            b.tristate("Ms_k", q, sb, false, b.keeper());
            break;
        }
        case FlipFlopKind::F_C2mosDynamic: {
            int m = b.node("m");
            b.tristate("Mm_c2", d, m, false);
            b.tristate("Ms_c2", m, q, true);
            break;
        }
        case FlipFlopKind::G_TspcDynamic: {
            // P2MOS master (stacked-P stages, transparent CK low) feeding
            // an N2MOS slave (stacked-N stages, transparent CK high).
            int x = b.node("x"), m = b.node("m"), y = b.node("y");
            int g1 = b.node("g1"), g2 = b.node("g2");
            int g3 = b.node("g3"), g4 = b.node("g4");
            b.pmos("Mg_s1a", g1, d, b.vdd());
            b.pmos("Mg_s1b", x, b.ck(), g1);
            b.nmos("Mg_s1c", x, d, 0);
            b.pmos("Mg_s2a", g2, x, b.vdd());
            b.pmos("Mg_s2b", m, b.ck(), g2);
            b.nmos("Mg_s2c", m, x, 0);
            b.pmos("Mg_s3a", y, m, b.vdd());
            b.nmos("Mg_s3b", y, b.ck(), g3);
            b.nmos("Mg_s3c", g3, m, 0);
            b.pmos("Mg_s4a", q, y, b.vdd());
            b.nmos("Mg_s4b", q, b.ck(), g4);
            b.nmos("Mg_s4c", g4, y, 0);
            break;
        }
    }
    return b.finish(d, q);
}

Circuit attach_fo4_load(const Circuit& c, const TechnologyConfig& tech) {
    if (c.pin_q < 0)
        throw ConfigError("attach_fo4_load: circuit has no Q pin");
    for (const auto& dev : c.devices)
        if (dev.name == "Mload_p")
            throw ConfigError("attach_fo4_load: load already attached");
    Circuit out = c;
    int qld = out.node_index("qload");
    int vdd = out.find_node("vdd");
    if (vdd < 0)
        throw ConfigError("attach_fo4_load: circuit has no vdd rail");
    out.devices.push_back({"Mload_p", Polarity::P, qld, c.pin_q, vdd, vdd,
                           4.0 * tech.p_to_n_ratio, 0.0});
    out.devices.push_back({"Mload_n", Polarity::N, qld, c.pin_q, 0, 0, 4.0, 0.0});
    return out;
}

} // namespace ffwnm

#include "ffwnm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ffwnm {

double TransientResult::voltage(int node, double t) const {
    if (time.empty()) throw Error("empty transient result");
    if (t <= time.front()) return voltages.front()[node];
    if (t >= time.back()) return voltages.back()[node];
    auto it = std::upper_bound(time.begin(), time.end(), t);
    std::size_t i = static_cast<std::size_t>(it - time.begin());
    double t0 = time[i - 1], t1 = time[i];
    double v0 = voltages[i - 1][node], v1 = voltages[i][node];
    if (t1 == t0) return v1;
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

Waveform TransientResult::node_waveform(int node) const {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(time.size());
    for (std::size_t i = 0; i < time.size(); ++i)
        pts.emplace_back(time[i], voltages[i][node]);
    return Waveform(std::move(pts));
}

namespace {

// Dense LU with partial pivoting, in place. Matrices here stay tiny
// (tens of unknowns), so a flat hand-rolled solve beats any generic
// library on the Newton hot path.
bool lu_solve(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a[r * n + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best < 1e-300) return false;
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        const double d = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[r * n + col] * d;
            if (f == 0.0) continue;
            a[r * n + col] = 0.0;
            for (int k = col + 1; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * b[k];
        b[r] = s / a[r * n + r];
    }
    return true;
}

struct CapEntry {
    int a = 0;          // node indices (0 = ground)
    int b = 0;
    double farads = 0.0;
};

struct SourceEntry {
    int node = 0;
    const Waveform* wave = nullptr;
    double g_series = 0.0;  // 1/r for resistive sources
    int branch = -1;        // unknown index for ideal sources
};

struct DeviceEntry {
    int d = 0, g = 0, s = 0;
    ResolvedDevice model;
};

} // namespace

struct Simulator::Impl {
    SimOptions opt;
    double vdd = 0.85;
    int n_nodes = 0;    // including ground
    int n_unknowns = 0; // (n_nodes - 1) + ideal source branches
    std::vector<DeviceEntry> devices;
    std::vector<CapEntry> caps;  // explicit + device gate caps + floor caps
    std::vector<SourceEntry> sources;

    // scratch, reused across steps
    mutable std::vector<double> jac, rhs, x, x_prev, f_scratch;

    int vx(int node) const { return node - 1; }  // unknown index of a node
    double nodev(const std::vector<double>& xx, int node) const {
        return node == 0 ? 0.0 : xx[node - 1];
    }

    // Assemble Jacobian and residual at state xx / time t.
    // mode: 0 = dc (gmin, no caps), 1 = transient (caps via companion).
    // For transient, g_eq and hist[] give each cap's companion model:
    //   i_cap = g_eq * (va - vb) - hist[k].
    void assemble(const std::vector<double>& xx, double t, int mode, double g_eq,
                  const std::vector<double>& hist, double src_scale) const {
        const int n = n_unknowns;
        std::fill(jac.begin(), jac.end(), 0.0);
        std::fill(rhs.begin(), rhs.end(), 0.0);

        for (const auto& de : devices) {
            const double vg = nodev(xx, de.g), vd = nodev(xx, de.d), vs = nodev(xx, de.s);
            DeviceEval e = resolved_current(de.model, vg - vs, vd - vs);
            // i_d flows drain -> source inside the device.
            if (de.d != 0) {
                rhs[vx(de.d)] += e.i_d;
                jac[vx(de.d) * n + vx(de.d)] += e.g_ds;
                if (de.g != 0) jac[vx(de.d) * n + vx(de.g)] += e.g_m;
                if (de.s != 0) jac[vx(de.d) * n + vx(de.s)] -= e.g_m + e.g_ds;
            }
            if (de.s != 0) {
                rhs[vx(de.s)] -= e.i_d;
                if (de.d != 0) jac[vx(de.s) * n + vx(de.d)] -= e.g_ds;
                if (de.g != 0) jac[vx(de.s) * n + vx(de.g)] -= e.g_m;
                jac[vx(de.s) * n + vx(de.s)] += e.g_m + e.g_ds;
            }
        }

        if (mode == 1) {
            for (std::size_t k = 0; k < caps.size(); ++k) {
                const auto& c = caps[k];
                const double dv = nodev(xx, c.a) - nodev(xx, c.b);
                const double i = g_eq * c.farads * dv - hist[k];
                if (c.a != 0) {
                    rhs[vx(c.a)] += i;
                    jac[vx(c.a) * n + vx(c.a)] += g_eq * c.farads;
                    if (c.b != 0) jac[vx(c.a) * n + vx(c.b)] -= g_eq * c.farads;
                }
                if (c.b != 0) {
                    rhs[vx(c.b)] -= i;
                    jac[vx(c.b) * n + vx(c.b)] += g_eq * c.farads;
                    if (c.a != 0) jac[vx(c.b) * n + vx(c.a)] -= g_eq * c.farads;
                }
            }
        } else {
            for (int node = 1; node < n_nodes; ++node) {
                rhs[vx(node)] += opt.gmin_s * xx[vx(node)];
                jac[vx(node) * n + vx(node)] += opt.gmin_s;
            }
        }

        for (const auto& se : sources) {
            const double v_src = se.wave->at(t) * src_scale;
            if (se.branch >= 0) {
                // ideal: extra branch unknown = current injected into node
                rhs[vx(se.node)] -= xx[se.branch];
                jac[vx(se.node) * n + se.branch] -= 1.0;
                rhs[se.branch] = nodev(xx, se.node) - v_src;
                jac[se.branch * n + vx(se.node)] = 1.0;
            } else {
                rhs[vx(se.node)] -= (v_src - nodev(xx, se.node)) * se.g_series;
                jac[vx(se.node) * n + vx(se.node)] += se.g_series;
            }
        }
    }

    // Damped Newton on the assembled system. Returns iterations used, or -1.
    int newton(std::vector<double>& xx, double t, int mode, double g_eq,
               const std::vector<double>& hist, double src_scale) const {
        const int n = n_unknowns;
        const int n_v = n_nodes - 1;
        for (int it = 1; it <= opt.newton_max_iters; ++it) {
            assemble(xx, t, mode, g_eq, hist, src_scale);
            double worst_f = 0.0;
            for (int i = 0; i < n_v; ++i) worst_f = std::max(worst_f, std::abs(rhs[i]));

            f_scratch = rhs;
            for (double& v : f_scratch) v = -v;
            std::vector<double>& a = jac;
            if (!lu_solve(a, f_scratch, n)) return -1;

            double worst_dv = 0.0;
            for (int i = 0; i < n_v; ++i) {
                double dv = std::clamp(f_scratch[i], -opt.newton_v_limit, opt.newton_v_limit);
                xx[i] += dv;
                worst_dv = std::max(worst_dv, std::abs(dv));
            }
            for (int i = n_v; i < n; ++i) xx[i] += f_scratch[i];

            if (worst_f <= opt.i_abstol_a && worst_dv <= opt.v_reltol * vdd + 1e-9)
                return it;
        }
        return -1;
    }
};

Simulator::Simulator(const Circuit& c, const TechnologyConfig& tech, SimOptions opt)
    : impl_(std::make_unique<Impl>()) {
    validate(c);
    auto& im = *impl_;
    im.opt = opt;
    im.vdd = tech.vdd_v;
    im.n_nodes = static_cast<int>(c.nodes.size());

    int branch = im.n_nodes - 1;
    for (const auto& s : c.sources) {
        SourceEntry se;
        se.node = s.node;
        se.wave = &s.wave;
        if (s.r_series > 0.0) {
            se.g_series = 1.0 / s.r_series;
        } else {
            se.branch = branch++;
        }
        im.sources.push_back(se);
    }
    im.n_unknowns = branch;

    for (const auto& d : c.devices) {
        DeviceEntry de;
        de.d = d.drain;
        de.g = d.gate;
        de.s = d.source;
        de.model = resolve_device(d, c.sample, tech);
        im.devices.push_back(de);
        // Lumped gate capacitance, split half to source and half to drain.
        im.caps.push_back({d.gate, d.source, 0.5 * de.model.c_gate_f});
        im.caps.push_back({d.gate, d.drain, 0.5 * de.model.c_gate_f});
    }
    for (const auto& cap : c.capacitors)
        im.caps.push_back({cap.a, cap.b, cap.farads});
    // Grounded floor capacitance keeps otherwise-floating storage nodes
    // well-posed in the transient system.
    for (int node = 1; node < im.n_nodes; ++node)
        im.caps.push_back({node, 0, opt.min_node_cap_f});

    im.jac.assign(static_cast<std::size_t>(im.n_unknowns) * im.n_unknowns, 0.0);
    im.rhs.assign(im.n_unknowns, 0.0);
    im.f_scratch.assign(im.n_unknowns, 0.0);
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

std::vector<double> Simulator::dc_operating_point(const std::vector<double>* seed,
                                                  double t) const {
    auto& im = *impl_;
    std::vector<double> x(im.n_unknowns, 0.0);
    if (seed) {
        if (static_cast<int>(seed->size()) != im.n_nodes)
            throw ConfigError("dc seed length must equal node count");
        for (int node = 1; node < im.n_nodes; ++node) x[node - 1] = (*seed)[node];
    }
    static const std::vector<double> no_hist;

    if (im.newton(x, t, 0, 0.0, no_hist, 1.0) < 0) {
        // Source stepping: ramp all sources from a small fraction upward,
        // reusing each level's solution as the next seed.
        std::fill(x.begin(), x.end(), 0.0);
        bool ok = true;
        for (int k = 1; k <= 20; ++k) {
            if (im.newton(x, t, 0, 0.0, no_hist, k / 20.0) < 0) { ok = false; break; }
        }
        if (!ok)
            throw ConvergenceError("dc operating point: Newton and source stepping failed");
    }

    std::vector<double> v(im.n_nodes, 0.0);
    for (int node = 1; node < im.n_nodes; ++node) v[node] = x[node - 1];
    return v;
}

TransientResult Simulator::transient(double t_stop, double dt_max,
                                     const std::vector<double>* initial,
                                     double t0) const {
    auto& im = *impl_;
    if (t_stop <= t0) throw ConfigError("transient: t_stop must exceed t0");
    if (dt_max <= 0.0) throw ConfigError("transient: dt_max must be positive");

    std::vector<double> v_nodes =
        initial ? *initial : dc_operating_point(nullptr, t0);
    if (static_cast<int>(v_nodes.size()) != im.n_nodes)
        throw ConfigError("transient: initial state length must equal node count");

    // Source breakpoints inside the window; steps never straddle one.
    std::vector<double> breakpoints;
    for (const auto& se : im.sources)
        for (const auto& [bt, bv] : se.wave->points())
            if (bt > t0 && bt < t_stop) breakpoints.push_back(bt);
    breakpoints.push_back(t_stop);
    std::sort(breakpoints.begin(), breakpoints.end());

    TransientResult res;
    auto record = [&](double t, const std::vector<double>& x) {
        std::vector<double> row(im.n_nodes, 0.0);
        for (int node = 1; node < im.n_nodes; ++node) row[node] = x[node - 1];
        res.time.push_back(t);
        res.voltages.push_back(std::move(row));
    };

    std::vector<double> x(im.n_unknowns, 0.0);
    for (int node = 1; node < im.n_nodes; ++node) x[node - 1] = v_nodes[node];
    record(t0, x);

    std::vector<double> x_prev = x;          // accepted state at t_n
    std::vector<double> x_older = x;         // accepted state at t_{n-1}
    std::vector<double> i_cap(im.caps.size(), 0.0);  // cap currents at t_n
    std::vector<double> hist(im.caps.size(), 0.0);

    double t = t0;
    double h = dt_max / 64.0;
    double h_prev = h;
    bool use_be = true;  // startup: no cap-current history yet
    std::size_t bp_idx = 0;

    auto cap_dv = [&](const std::vector<double>& xx, const CapEntry& c) {
        return im.nodev(xx, c.a) - im.nodev(xx, c.b);
    };

    while (t < t_stop - 1e-21) {
        h = std::min({h, dt_max, t_stop - t});
        while (bp_idx < breakpoints.size() && breakpoints[bp_idx] <= t + 1e-21) ++bp_idx;
        bool at_bp = false;
        if (bp_idx < breakpoints.size() && t + h >= breakpoints[bp_idx] - 1e-21) {
            h = breakpoints[bp_idx] - t;
            at_bp = true;
        }

        const double g_eq = use_be ? 1.0 / h : 2.0 / h;
        for (std::size_t k = 0; k < im.caps.size(); ++k) {
            const double dv_n = cap_dv(x_prev, im.caps[k]);
            hist[k] = use_be ? g_eq * im.caps[k].farads * dv_n
                             : g_eq * im.caps[k].farads * dv_n + i_cap[k];
        }

        // Predictor: linear extrapolation of node voltages.
        x = x_prev;
        if (h_prev > 0.0) {
            const double r = h / h_prev;
            for (int i = 0; i < im.n_nodes - 1; ++i)
                x[i] = x_prev[i] + (x_prev[i] - x_older[i]) * r;
        }

        int iters = im.newton(x, t + h, 1, g_eq, hist, 1.0);
        if (iters < 0) {
            ++res.stats.rejected_steps;
            h *= 0.5;
            use_be = true;
            if (h < im.opt.dt_min_s) {
                res.stats.steps = static_cast<long>(res.time.size()) - 1;
                throw SimulationFailure("timestep underflow at t=" + std::to_string(t),
                                        std::move(res));
            }
            continue;
        }

        for (std::size_t k = 0; k < im.caps.size(); ++k) {
            const double dv = cap_dv(x, im.caps[k]);
            i_cap[k] = g_eq * im.caps[k].farads * dv - hist[k];
        }
        x_older = x_prev;
        x_prev = x;
        h_prev = h;
        t += h;
        res.stats.newton_iters += iters;
        record(t, x);

        use_be = at_bp;  // damp the corner right after a source breakpoint
        if (iters <= 8) h *= 1.5;
    }

    res.stats.steps = static_cast<long>(res.time.size()) - 1;
    return res;
}

std::vector<double> dc_operating_point(const Circuit& c, const TechnologyConfig& tech,
                                       const std::vector<double>* seed) {
    return Simulator(c, tech).dc_operating_point(seed);
}

TransientResult transient(const Circuit& c, const TechnologyConfig& tech, double t_stop,
                          double dt_max, const std::vector<double>* initial) {
    return Simulator(c, tech).transient(t_stop, dt_max, initial);
}

} // namespace ffwnm

#pragma once

#include <memory>
#include <vector>

#include "ffwnm/netlist.hpp"
#include "ffwnm/waveform.hpp"

namespace ffwnm {

struct SimOptions {
    double i_abstol_a = 1e-12;      // KCL residual bound per node
    double v_reltol = 1e-4;         // Newton update bound, relative to vdd
    double dt_min_s = 1e-15;
    double newton_v_limit = 0.3;    // per-iteration voltage update clamp
    int newton_max_iters = 80;
    double min_node_cap_f = 1e-17;  // grounded floor cap on non-rail nodes
    double gmin_s = 1e-12;          // dc leak to ground, keeps MNA well-posed
};

struct SolverStats {
    long steps = 0;
    long newton_iters = 0;
    long rejected_steps = 0;
};

/// Sampled node waveforms plus solver counters. Voltages are indexed
/// [sample][node] with node indices matching Circuit::nodes (ground
/// included as column 0).
struct TransientResult {
    std::vector<double> time;
    std::vector<std::vector<double>> voltages;
    SolverStats stats;

    const std::vector<double>& final_voltages() const { return voltages.back(); }
    double voltage(int node, double t) const;
    Waveform node_waveform(int node) const;
};

/// Thrown on timestep underflow; carries whatever was integrated so far.
class SimulationFailure : public Error {
public:
    SimulationFailure(const std::string& msg, TransientResult partial)
        : Error(msg), partial_(std::move(partial)) {}
    const TransientResult& partial() const { return partial_; }

private:
    TransientResult partial_;
};

/// One nonlinear MNA problem: a circuit bound to a technology. Instances
/// own no shared state, so any number can run concurrently.
class Simulator {
public:
    Simulator(const Circuit& c, const TechnologyConfig& tech, SimOptions opt = {});
    ~Simulator();
    Simulator(Simulator&&) noexcept;
    Simulator& operator=(Simulator&&) noexcept;

    /// Newton at a fixed source time (default 0), caps open, gmin tied.
    /// `seed` (full node-voltage vector, ground included) biases the search
    /// toward one stable state of multistable circuits. Falls back to
    /// source stepping before giving up with ConvergenceError.
    std::vector<double> dc_operating_point(const std::vector<double>* seed = nullptr,
                                           double t = 0.0) const;

    /// Implicit transient integration from t0 to t_stop. Trapezoidal with
    /// backward-Euler startup and fallback after discontinuities or Newton
    /// rejections; adaptive step bounded by dt_max. `initial` is a full
    /// node-voltage vector (defaults to the dc operating point at t0).
    TransientResult transient(double t_stop, double dt_max,
                              const std::vector<double>* initial = nullptr,
                              double t0 = 0.0) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Free-function forms of the module operations.
std::vector<double> dc_operating_point(const Circuit& c, const TechnologyConfig& tech,
                                       const std::vector<double>* seed = nullptr);
TransientResult transient(const Circuit& c, const TechnologyConfig& tech, double t_stop,
                          double dt_max, const std::vector<double>* initial = nullptr);

} // namespace ffwnm

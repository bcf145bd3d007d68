#pragma once

#include <string>

#include "ffwnm/errors.hpp"

namespace ffwnm {

enum class Technology { Cmos16, Finfet16 };
enum class Polarity { N, P };

const char* to_string(Technology t);
Technology technology_from_string(const std::string& s);

/// One draw of the varying geometric parameters. CMOS carries drawn L/W
/// (the channel-offset constants l_int/w_int ride along so geometry can be
/// resolved without the full technology config); FinFET carries fin
/// geometry instead of W.
struct ProcessSample {
    Technology technology = Technology::Cmos16;
    double t_oxe_n_nm = 0.0;
    double t_oxe_p_nm = 0.0;
    double l_nm = 0.0;      // drawn gate length (CMOS), gate length (FinFET)
    double w_nm = 0.0;      // drawn width, CMOS only
    double h_fin_nm = 0.0;  // FinFET only
    double t_fin_nm = 0.0;  // FinFET only
    int n_fins = 1;         // FinFET only
    double l_int_nm = 0.0;  // CMOS channel-length offset per side
    double w_int_nm = 0.0;  // CMOS channel-width offset per side
};

/// Per-parameter standard deviations; mirrors the varying fields of
/// ProcessSample for the owning technology. Non-varying entries are zero.
struct ProcessSigma {
    double t_oxe_n_nm = 0.0;
    double t_oxe_p_nm = 0.0;
    double l_nm = 0.0;
    double w_nm = 0.0;
    double h_fin_nm = 0.0;
    double t_fin_nm = 0.0;
};

/// Compact-model coefficients for one device polarity.
struct ModelCoeffs {
    double vth0_v = 0.3;        // threshold magnitude at nominal t_oxe
    double mobility_m2_vs = 3e-3;  // effective carrier mobility
    double subthreshold_n = 1.4;   // slope factor (SS = n * phi_t * ln 10)
    double lambda_per_v = 0.1;     // channel-length modulation
};

struct TechnologyConfig {
    Technology technology = Technology::Cmos16;
    double vdd_v = 0.85;
    double temperature_k = 300.0;
    ProcessSample nominal;
    ProcessSigma sigma;
    ModelCoeffs nmos;
    ModelCoeffs pmos;
    double oxide_eps_rel = 3.9;   // EOT convention: SiO2 permittivity
    double body_effect_gamma = 0.0;  // body terminal modeled, effect off
    // Cell-generator sizing knobs.
    double p_to_n_ratio = 2.0;    // inverter P multiplier relative to N
    double keeper_mult = 0.5;     // weak clocked keepers (pseudo-static kinds)

    double t_oxe_nominal(Polarity p) const {
        return p == Polarity::N ? nominal.t_oxe_n_nm : nominal.t_oxe_p_nm;
    }
    const ModelCoeffs& coeffs(Polarity p) const {
        return p == Polarity::N ? nmos : pmos;
    }
};

/// Built-in model cards: 16 nm CMOS HP and 16 nm FinFET LSTP, both run at
/// VDD = 0.85 V. Coefficients are calibrated against the timing bands in
/// the test suite, not fitted to any foundry data.
TechnologyConfig default_technology(Technology t);

/// One transistor in a circuit. Terminals are node indices into the owning
/// Circuit. `delta_vth_v` is the NBTI aging shift (P devices only; N devices
/// stay at zero in this scope).
struct DeviceInstance {
    std::string name;
    Polarity polarity = Polarity::N;
    int drain = -1;
    int gate = -1;
    int source = -1;
    int body = -1;
    double multiplier = 1.0;   // width multiplier (CMOS) / fin multiplier (FinFET)
    double delta_vth_v = 0.0;
};

struct EffectiveGeometry {
    double w_eff_nm = 0.0;
    double l_eff_nm = 0.0;
};

/// Resolve drawn geometry to effective channel geometry.
/// CMOS: L_eff = L_drawn - 2*l_int, W_eff = W_drawn - 2*w_int.
/// FinFET: W_eff = n_fins * (2*h_fin + t_fin), L_eff = L.
/// Throws InvalidGeometryError if either result is non-positive.
EffectiveGeometry effective_geometry(const ProcessSample& sample);

double t_oxe_of(const ProcessSample& sample, Polarity p);

/// Oxide capacitance per unit area in F/m^2 for an equivalent oxide
/// thickness given in nm.
double c_ox_per_area(double t_oxe_nm, double eps_rel);

/// Threshold magnitude: vth0 * (t_oxe / t_oxe_nominal) + delta_vth.
/// Returned as a positive magnitude for both polarities.
double threshold_voltage(const DeviceInstance& dev, const ProcessSample& sample,
                         const TechnologyConfig& tech);

/// Drain current with the smooth interpolated model (exponential
/// subthreshold, square-law saturation, symmetric forward/reverse form so
/// I_D = 0 exactly at v_ds = 0). Sign follows the usual convention:
/// positive into the drain for an N device in forward bias. P devices are
/// evaluated as the polarity-mirrored N model with their own coefficients.
double drain_current(const DeviceInstance& dev, double v_gs, double v_ds,
                     const ProcessSample& sample, const TechnologyConfig& tech);

/// Total gate capacitance: c_ox_per_area * W_eff * L_eff * multiplier.
double gate_capacitance(const DeviceInstance& dev, const ProcessSample& sample,
                        const TechnologyConfig& tech);

/// Flattened per-device model parameters, precomputed once per circuit
/// instance so the simulator hot loop only evaluates bias-dependent terms.
struct ResolvedDevice {
    Polarity polarity = Polarity::N;
    double vth_eff_v = 0.0;    // includes t_oxe scaling and aging shift
    double n_phi_t = 0.0;      // slope factor * thermal voltage
    double i_spec_a = 0.0;     // 2 n mu C_ox phi_t^2 (W_eff/L_eff) * mult
    double lambda_per_v = 0.0;
    double c_gate_f = 0.0;
};

ResolvedDevice resolve_device(const DeviceInstance& dev, const ProcessSample& sample,
                              const TechnologyConfig& tech);

/// Current and its partial derivatives for the resolved model; the
/// workhorse of the Newton assembly. Voltages are N-referenced (callers
/// flip signs for P devices via resolved_current()).
struct DeviceEval {
    double i_d = 0.0;
    double g_m = 0.0;   // dI/dVgs
    double g_ds = 0.0;  // dI/dVds
};

DeviceEval resolved_current(const ResolvedDevice& dev, double v_gs, double v_ds);

double thermal_voltage(double temperature_k);

} // namespace ffwnm

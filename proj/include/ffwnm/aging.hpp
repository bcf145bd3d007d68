#pragma once

#include <vector>

#include "ffwnm/engine.hpp"
#include "ffwnm/netlist.hpp"

namespace ffwnm {

/// NBTI threshold-shift fitting parameters. The interface-trap term is
///   exp(-TITTD / kT) * [(|vgs| - |vth|) / t_oxe]^TITCE * exp(TITFD * E_ox) * t^NIT
/// and the oxide-trap term is
///   ot_scale * exp[(TOTFD + TOTTD / T) * E_ox] * t^NOT,
/// with E_ox = field_scale * |vgs| / t_oxe, t in years, and shifts in volts.
/// Defaults are calibrated so a 10-year stress degrades flip-flop
/// clock-to-Q delay by a mid-teens percentage at either built-in
/// technology (see tests/test_aging.cpp for the band checks).
struct AgingParams {
    double tittd_ev = 0.10;        // temperature activation, interface traps
    double titce = 1.5;            // inversion-charge exponent
    double titfd_nm_per_v = 1.2;   // oxide-field dependence, interface traps
    double totfd_nm_per_v = 0.5;   // oxide-field dependence, oxide traps
    double tottd_nm_k_per_v = 150.0;  // temperature component, oxide traps
    double nit = 0.25;             // time exponent, interface traps
    double not_exp = 0.15;         // time exponent, oxide traps
    double ot_scale_v = 3.0e-3;    // proportionality constant of the oxide term
    double field_scale = 1.0;      // bias -> oxide field conversion
    double k_ev_per_k = 8.617333262e-5;
};

/// Per-device threshold shifts at one stress age. Indices parallel the
/// owning Circuit's device list; N devices stay at zero (NBTI-only scope).
struct AgingState {
    double age_years = 0.0;
    std::vector<double> delta_vth_v;
};

double delta_vth_interface(const AgingParams& p, double v_gs, double v_ds, double vth,
                           double t_oxe_nm, double temperature_k, double t_years);

double delta_vth_oxide(const AgingParams& p, double v_gs, double v_ds, double t_oxe_nm,
                       double temperature_k, double t_years);

/// Two-phase stress flow: a pre-stress dc analysis of both static clock
/// phases (CK = 0 and CK = vdd, 50/50 duty, D held low) establishes each
/// P device's stress bias; the post-stress shift is the sum of the
/// interface and oxide terms at that averaged bias.
AgingState apply_stress(const Circuit& c, const TechnologyConfig& tech,
                        const AgingParams& p, double age_years);

/// Clone with the aging shifts folded into the device instances.
Circuit with_aging(const Circuit& c, const AgingState& aging);

} // namespace ffwnm

#include "ffwnm/aging.hpp"

#include <cmath>

namespace ffwnm {

double delta_vth_interface(const AgingParams& p, double v_gs, double /*v_ds*/, double vth,
                           double t_oxe_nm, double temperature_k, double t_years) {
    if (t_years < 0.0) throw NumericDomainError("stress time must be non-negative");
    const double overdrive = std::abs(v_gs) - std::abs(vth);
    if (overdrive <= 0.0 || t_years == 0.0) return 0.0;  // no inversion stress
    const double e_ox = p.field_scale * std::abs(v_gs) / t_oxe_nm;
    return std::exp(-p.tittd_ev / (p.k_ev_per_k * temperature_k)) *
           std::pow(overdrive / t_oxe_nm, p.titce) * std::exp(p.titfd_nm_per_v * e_ox) *
           std::pow(t_years, p.nit);
}

double delta_vth_oxide(const AgingParams& p, double v_gs, double /*v_ds*/, double t_oxe_nm,
                       double temperature_k, double t_years) {
    if (t_years < 0.0) throw NumericDomainError("stress time must be non-negative");
    if (t_years == 0.0) return 0.0;
    const double e_ox = p.field_scale * std::abs(v_gs) / t_oxe_nm;
    return p.ot_scale_v *
           std::exp((p.totfd_nm_per_v + p.tottd_nm_k_per_v / temperature_k) * e_ox) *
           std::pow(t_years, p.not_exp);
}

AgingState apply_stress(const Circuit& c, const TechnologyConfig& tech,
                        const AgingParams& p, double age_years) {
    if (c.pin_ck < 0) throw ConfigError("apply_stress: circuit has no CK pin");

    AgingState state;
    state.age_years = age_years;
    state.delta_vth_v.assign(c.devices.size(), 0.0);
    if (age_years == 0.0) return state;

    // Pre-stress phase: static operating points at the two clock levels.
    Circuit stress = c;
    auto drive_pin = [&stress](int pin, const char* name, double volts) {
        if (pin < 0) return;
        for (auto& s : stress.sources)
            if (s.node == pin) { s.wave = Waveform::dc(volts); return; }
        VoltageSource src;
        src.name = name;
        src.node = pin;
        src.wave = Waveform::dc(volts);
        stress.sources.push_back(src);
    };
    drive_pin(stress.pin_d, "VSTRD", 0.0);
    drive_pin(stress.pin_ck, "VSTRCK", 0.0);
    Simulator sim_low(stress, tech);
    const auto v_low = sim_low.dc_operating_point();

    drive_pin(stress.pin_ck, "VSTRCK", tech.vdd_v);
    Simulator sim_high(stress, tech);
    const auto v_high = sim_high.dc_operating_point();

    for (std::size_t i = 0; i < c.devices.size(); ++i) {
        const auto& dev = c.devices[i];
        if (dev.polarity != Polarity::P) continue;
        auto bias = [&](const std::vector<double>& v) {
            return std::pair{std::abs(v[dev.gate] - v[dev.source]),
                             std::abs(v[dev.drain] - v[dev.source])};
        };
        const auto [gs_low, ds_low] = bias(v_low);
        const auto [gs_high, ds_high] = bias(v_high);
        const double v_gs = 0.5 * (gs_low + gs_high);  // 50% duty weighting
        const double v_ds = 0.5 * (ds_low + ds_high);

        DeviceInstance fresh = dev;
        fresh.delta_vth_v = 0.0;
        const double vth = threshold_voltage(fresh, c.sample, tech);
        const double t_oxe = t_oxe_of(c.sample, Polarity::P);
        state.delta_vth_v[i] =
            delta_vth_interface(p, v_gs, v_ds, vth, t_oxe, tech.temperature_k, age_years) +
            delta_vth_oxide(p, v_gs, v_ds, t_oxe, tech.temperature_k, age_years);
    }
    return state;
}

Circuit with_aging(const Circuit& c, const AgingState& aging) {
    if (aging.delta_vth_v.size() != c.devices.size())
        throw ConfigError("with_aging: state does not match circuit device list");
    Circuit out = c;
    for (std::size_t i = 0; i < out.devices.size(); ++i)
        out.devices[i].delta_vth_v = aging.delta_vth_v[i];
    return out;
}

} // namespace ffwnm

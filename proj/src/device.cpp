#include "ffwnm/device.hpp"

#include <cmath>

namespace ffwnm {

namespace {

constexpr double kEps0FPerM = 8.8541878128e-12;
constexpr double kBoltzmannEvPerK = 8.617333262e-5;

// ln(1 + e^x) without overflow; smooth everywhere.
double softplus(double x) {
    if (x > 36.0) return x;           // e^-x below double noise
    if (x < -36.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

// d softplus / dx = logistic(x)
double logistic(double x) {
    if (x > 36.0) return 1.0;
    if (x < -36.0) return std::exp(x);
    return 1.0 / (1.0 + std::exp(-x));
}

} // namespace

const char* to_string(Technology t) {
    return t == Technology::Cmos16 ? "CMOS16" : "FINFET16";
}

Technology technology_from_string(const std::string& s) {
    if (s == "CMOS16") return Technology::Cmos16;
    if (s == "FINFET16") return Technology::Finfet16;
    throw ConfigError("unknown technology '" + s + "' (expected CMOS16 or FINFET16)");
}

double thermal_voltage(double temperature_k) {
    return kBoltzmannEvPerK * temperature_k;  // eV == V for unit charge
}

TechnologyConfig default_technology(Technology t) {
    TechnologyConfig cfg;
    cfg.technology = t;
    cfg.vdd_v = 0.85;
    cfg.temperature_k = 300.0;
    if (t == Technology::Cmos16) {
        cfg.nominal.technology = t;
        cfg.nominal.t_oxe_n_nm = 0.95;
        cfg.nominal.t_oxe_p_nm = 1.0;
        cfg.nominal.l_nm = 16.0;
        cfg.nominal.w_nm = 16.0;
        cfg.nominal.l_int_nm = 1.45;
        cfg.nominal.w_int_nm = 5.0;
        cfg.sigma.t_oxe_n_nm = 0.0317;
        cfg.sigma.t_oxe_p_nm = 0.0334;
        cfg.sigma.l_nm = 0.26;
        cfg.sigma.w_nm = 0.26;
        cfg.nmos = {0.31, 4.5e-3, 1.42, 0.16};
        cfg.pmos = {0.29, 2.4e-3, 1.45, 0.16};
        cfg.p_to_n_ratio = 2.0;
    } else {
        cfg.nominal.technology = t;
        cfg.nominal.t_oxe_n_nm = 1.0;
        cfg.nominal.t_oxe_p_nm = 1.0;
        cfg.nominal.l_nm = 20.0;
        cfg.nominal.h_fin_nm = 26.0;
        cfg.nominal.t_fin_nm = 12.0;
        cfg.nominal.n_fins = 1;
        cfg.sigma.t_oxe_n_nm = 0.0334;
        cfg.sigma.t_oxe_p_nm = 0.0334;
        cfg.sigma.l_nm = 0.667;
        cfg.sigma.h_fin_nm = 0.867;
        cfg.sigma.t_fin_nm = 0.40;
        cfg.nmos = {0.40, 1.1e-3, 1.18, 0.08};
        cfg.pmos = {0.39, 0.9e-3, 1.20, 0.08};
        cfg.p_to_n_ratio = 1.0;   // near-symmetric fin drive
    }
    return cfg;
}

EffectiveGeometry effective_geometry(const ProcessSample& sample) {
    EffectiveGeometry g;
    if (sample.technology == Technology::Cmos16) {
        g.l_eff_nm = sample.l_nm - 2.0 * sample.l_int_nm;
        g.w_eff_nm = sample.w_nm - 2.0 * sample.w_int_nm;
    } else {
        g.l_eff_nm = sample.l_nm;
        g.w_eff_nm = sample.n_fins * (2.0 * sample.h_fin_nm + sample.t_fin_nm);
    }
    if (g.l_eff_nm <= 0.0 || g.w_eff_nm <= 0.0)
        throw InvalidGeometryError("effective geometry non-positive (W_eff=" +
                                   std::to_string(g.w_eff_nm) + " nm, L_eff=" +
                                   std::to_string(g.l_eff_nm) + " nm)");
    return g;
}

double t_oxe_of(const ProcessSample& sample, Polarity p) {
    return p == Polarity::N ? sample.t_oxe_n_nm : sample.t_oxe_p_nm;
}

double c_ox_per_area(double t_oxe_nm, double eps_rel) {
    return eps_rel * kEps0FPerM / (t_oxe_nm * 1e-9);
}

double threshold_voltage(const DeviceInstance& dev, const ProcessSample& sample,
                         const TechnologyConfig& tech) {
    const double t_oxe = t_oxe_of(sample, dev.polarity);
    const double vth0 = tech.coeffs(dev.polarity).vth0_v;
    return vth0 * (t_oxe / tech.t_oxe_nominal(dev.polarity)) + dev.delta_vth_v;
}

double gate_capacitance(const DeviceInstance& dev, const ProcessSample& sample,
                        const TechnologyConfig& tech) {
    const auto geo = effective_geometry(sample);
    const double cox = c_ox_per_area(t_oxe_of(sample, dev.polarity), tech.oxide_eps_rel);
    return cox * (geo.w_eff_nm * 1e-9) * (geo.l_eff_nm * 1e-9) * dev.multiplier;
}

ResolvedDevice resolve_device(const DeviceInstance& dev, const ProcessSample& sample,
                              const TechnologyConfig& tech) {
    const auto geo = effective_geometry(sample);
    const auto& mc = tech.coeffs(dev.polarity);
    ResolvedDevice r;
    r.polarity = dev.polarity;
    r.vth_eff_v = threshold_voltage(dev, sample, tech);
    r.n_phi_t = mc.subthreshold_n * thermal_voltage(tech.temperature_k);
    const double cox = c_ox_per_area(t_oxe_of(sample, dev.polarity), tech.oxide_eps_rel);
    const double phi_t = thermal_voltage(tech.temperature_k);
    r.i_spec_a = 2.0 * mc.subthreshold_n * mc.mobility_m2_vs * cox * phi_t * phi_t *
                 (geo.w_eff_nm / geo.l_eff_nm) * dev.multiplier;
    r.lambda_per_v = mc.lambda_per_v;
    r.c_gate_f = gate_capacitance(dev, sample, tech);
    return r;
}

// Interpolated charge-sheet form: the normalized channel current is the
// difference between a forward term driven by the source-side overdrive and
// a reverse term driven by the drain-side overdrive,
//   i = F((v_gs - vth)/(n phi_t)) - F((v_gd - vth)/(n phi_t)),
//   F(u) = ln^2(1 + e^{u/2}),
// which reduces to the exponential subthreshold law for u << 0 and to the
// square law in saturation, stays exactly zero at v_ds = 0, and is smooth
// in both bias variables. Channel-length modulation multiplies the result
// by (1 + lambda |v_ds|); since the core vanishes at v_ds = 0 the product
// remains C1 there.
DeviceEval resolved_current(const ResolvedDevice& dev, double v_gs, double v_ds) {
    if (!std::isfinite(v_gs) || !std::isfinite(v_ds))
        throw NumericDomainError("non-finite bias voltage");

    // P devices mirror the N equations with flipped signs.
    const double sign = dev.polarity == Polarity::N ? 1.0 : -1.0;
    const double vgs = sign * v_gs;
    const double vds = sign * v_ds;

    const double inv_npt = 1.0 / dev.n_phi_t;
    const double uf = (vgs - dev.vth_eff_v) * inv_npt;
    const double ur = (vgs - vds - dev.vth_eff_v) * inv_npt;

    const double sf = softplus(0.5 * uf);
    const double sr = softplus(0.5 * ur);
    const double core = sf * sf - sr * sr;

    // d core / du — via softplus chain rule.
    const double dsf = sf * logistic(0.5 * uf);          // d(sf^2)/duf = 2 sf * 0.5 logi
    const double dsr = sr * logistic(0.5 * ur);

    const double clm = 1.0 + dev.lambda_per_v * std::abs(vds);
    const double dclm = dev.lambda_per_v * (vds >= 0.0 ? 1.0 : -1.0);

    const double i_core = dev.i_spec_a * core;
    double i = i_core * clm;
    // dI/dvgs: both uf and ur move with vgs.
    double gm = dev.i_spec_a * (dsf - dsr) * inv_npt * clm;
    // dI/dvds: only ur moves (negatively), plus the CLM term.
    double gds = dev.i_spec_a * dsr * inv_npt * clm + i_core * dclm;

    DeviceEval e;
    e.i_d = sign * i;
    e.g_m = gm;    // derivatives are polarity-invariant (sign^2)
    e.g_ds = gds;
    return e;
}

double drain_current(const DeviceInstance& dev, double v_gs, double v_ds,
                     const ProcessSample& sample, const TechnologyConfig& tech) {
    return resolved_current(resolve_device(dev, sample, tech), v_gs, v_ds).i_d;
}

} // namespace ffwnm

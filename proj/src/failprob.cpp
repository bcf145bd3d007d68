#include "ffwnm/failprob.hpp"

#include <cmath>

#include "ffwnm/variation.hpp"

namespace ffwnm {

namespace {

// Cody's near-minimax rational approximations for erfc (Math. Comp. 1969),
// good to ~18 significant digits in exact arithmetic. Only the erfc path
// is needed here; the small-|x| erf segment handles the center.
double cody_erfc(double x) {
    static const double a[5] = {3.1611237438705656, 113.864154151050156,
                                377.485237685302021, 3209.37758913846947,
                                0.185777706184603153};
    static const double b[4] = {23.6012909523441209, 244.024637934444173,
                                1282.61652607737228, 2844.23683343917062};
    static const double c[9] = {0.564188496988670089, 8.88314979438837594,
                                66.1191906371416295, 298.635138197400131,
                                881.95222124176909, 1712.04761263407058,
                                2051.07837782607147, 1230.33935479799725,
                                2.15311535474403846e-8};
    static const double d[8] = {15.7449261107098347, 117.693950891312499,
                                537.181101862009858, 1621.38957456669019,
                                3290.79923573345963, 4362.61909014324716,
                                3439.36767414372164, 1230.33935480374942};
    static const double p[6] = {0.305326634961232344, 0.360344899949804439,
                                0.125781726111229246, 0.0160837851487422766,
                                6.58749161529837803e-4, 0.0163153871373020978};
    static const double q[5] = {2.56852019228982242, 1.87295284992346047,
                                0.527905102951428412, 0.0605183413124413191,
                                0.00233520497626869185};
    constexpr double inv_sqrt_pi = 0.56418958354775628695;

    const double y = std::abs(x);
    double result;
    if (y <= 0.46875) {
        const double ysq = y > 1.11e-16 ? y * y : 0.0;
        double xnum = a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * ysq;
            xden = (xden + b[i]) * ysq;
        }
        return 1.0 - x * (xnum + a[3]) / (xden + b[3]);
    } else if (y <= 4.0) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        result = (xnum + c[7]) / (xden + d[7]);
    } else if (y < 26.6) {
        const double ysq = 1.0 / (y * y);
        double xnum = p[5] * ysq;
        double xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + p[i]) * ysq;
            xden = (xden + q[i]) * ysq;
        }
        result = ysq * (xnum + p[4]) / (xden + q[4]);
        result = (inv_sqrt_pi - result) / y;
    } else {
        result = 0.0;
    }
    if (result != 0.0) {
        // split exp(-y^2) to dodge cancellation in the exponent
        const double ysq16 = std::trunc(y * 16.0) / 16.0;
        const double del = (y - ysq16) * (y + ysq16);
        result *= std::exp(-ysq16 * ysq16) * std::exp(-del);
    }
    return x < 0.0 ? 2.0 - result : result;
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

} // namespace

double normal_cdf(double x) {
    if (std::isnan(x)) throw NumericDomainError("normal_cdf: NaN argument");
    return 0.5 * cody_erfc(-x * kInvSqrt2);
}

double normal_cdf_inv(double p) {
    // Wichura, Applied Statistics 37 (1988), algorithm AS241 (PPND16).
    static const double a[8] = {3.3871328727963666080e0, 1.3314166789178437745e2,
                                1.9715909503065514427e3, 1.3731693765509461125e4,
                                4.5921953931549871457e4, 6.7265770927008700853e4,
                                3.3430575583588128105e4, 2.5090809287301226727e3};
    static const double b[7] = {4.2313330701600911252e1, 6.8718700749205790830e2,
                                5.3941960214247511077e3, 2.1213794301586595867e4,
                                3.9307895800092710610e4, 2.8729085735721942674e4,
                                5.2264952788528545610e3};
    static const double c[8] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                5.76949722146069140550e0, 3.64784832476320460504e0,
                                1.27045825245236838258e0, 2.41780725177450611770e-1,
                                2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[7] = {2.05319162663775882187e0, 1.67638483018380384940e0,
                                6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                1.05075007164441684324e-9};
    static const double e[8] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                1.78482653991729133580e0, 2.96560571828504891230e-1,
                                2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[7] = {5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                2.04426310338993978564e-15};
    if (!(p > 0.0 && p < 1.0))
        throw NumericDomainError("normal_cdf_inv: p must lie in (0, 1)");

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        double num = a[7], den = b[6];
        for (int i = 6; i >= 0; --i) num = num * r + a[i];
        for (int i = 5; i >= 0; --i) den = den * r + b[i];
        return q * num / (den * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        double num = c[7], den = d[6];
        for (int i = 6; i >= 0; --i) num = num * r + c[i];
        for (int i = 5; i >= 0; --i) den = den * r + d[i];
        val = num / (den * r + 1.0);
    } else {
        r -= 5.0;
        double num = e[7], den = f[6];
        for (int i = 6; i >= 0; --i) num = num * r + e[i];
        for (int i = 5; i >= 0; --i) den = den * r + f[i];
        val = num / (den * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

namespace {

// sigma -> 0 limit is a unit step at the mean
double step_limit(double above_mean, bool allow_degenerate) {
    if (!allow_degenerate)
        throw NumericDomainError("failure probability: sigma must be positive");
    return above_mean > 0.0 ? 1.0 : (above_mean < 0.0 ? 0.0 : 0.5);
}

} // namespace

double p_fail_low(double mu, double sigma, double delta_v, bool allow_degenerate) {
    if (sigma <= 0.0) return step_limit(delta_v - mu, allow_degenerate);
    return normal_cdf((delta_v - mu) / sigma);
}

double p_fail_high(double mu, double sigma, double delta_v, double vdd,
                   bool allow_degenerate) {
    if (sigma <= 0.0) return step_limit(mu - (vdd - delta_v), allow_degenerate);
    return 1.0 - normal_cdf((vdd - delta_v - mu) / sigma);
}

FailureCurve build_curve(const StatSummary& summary_low, const StatSummary& summary_high,
                         double vdd, const std::vector<double>& grid,
                         bool allow_degenerate) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1])
            throw ConfigError("build_curve: delta_v grid must be ascending");
    if (!grid.empty() && (grid.front() < 0.0 || grid.back() > vdd))
        throw ConfigError("build_curve: delta_v grid must stay within [0, vdd]");

    FailureCurve curve;
    curve.delta_v = grid;
    curve.p_low.reserve(grid.size());
    curve.p_high.reserve(grid.size());
    for (double dv : grid) {
        curve.p_low.push_back(p_fail_low(summary_low.mean, summary_low.std, dv,
                                         allow_degenerate));
        curve.p_high.push_back(p_fail_high(summary_high.mean, summary_high.std, dv, vdd,
                                           allow_degenerate));
    }
    return curve;
}

std::vector<double> default_delta_v_grid(double vdd, double step_v) {
    std::vector<double> g;
    const int n = static_cast<int>(std::floor(vdd / step_v + 0.5));
    g.reserve(n + 1);
    for (int i = 0; i <= n; ++i) g.push_back(std::min(i * step_v, vdd));
    return g;
}

} // namespace ffwnm

#include "ffwnm/config.hpp"

#include <fstream>
#include <sstream>

namespace ffwnm {

RunConfig default_run_config() {
    RunConfig cfg;  // member defaults are already the full built-in setup
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : v) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double num(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

void apply_tech_key(TechnologyConfig& t, const std::string& key, const std::string& val) {
    auto n = [&](void) { return num(val, key); };
    if (key == "vdd") t.vdd_v = n();
    else if (key == "temperature") t.temperature_k = n();
    else if (key == "nominal.t_oxe_n") t.nominal.t_oxe_n_nm = n();
    else if (key == "nominal.t_oxe_p") t.nominal.t_oxe_p_nm = n();
    else if (key == "nominal.l") t.nominal.l_nm = n();
    else if (key == "nominal.w") t.nominal.w_nm = n();
    else if (key == "nominal.l_int") t.nominal.l_int_nm = n();
    else if (key == "nominal.w_int") t.nominal.w_int_nm = n();
    else if (key == "nominal.h_fin") t.nominal.h_fin_nm = n();
    else if (key == "nominal.t_fin") t.nominal.t_fin_nm = n();
    else if (key == "nominal.n_fins") t.nominal.n_fins = static_cast<int>(n());
    else if (key == "sigma.t_oxe_n") t.sigma.t_oxe_n_nm = n();
    else if (key == "sigma.t_oxe_p") t.sigma.t_oxe_p_nm = n();
    else if (key == "sigma.l") t.sigma.l_nm = n();
    else if (key == "sigma.w") t.sigma.w_nm = n();
    else if (key == "sigma.h_fin") t.sigma.h_fin_nm = n();
    else if (key == "sigma.t_fin") t.sigma.t_fin_nm = n();
    else if (key == "nmos.vth0") t.nmos.vth0_v = n();
    else if (key == "nmos.mobility") t.nmos.mobility_m2_vs = n();
    else if (key == "nmos.subthreshold_n") t.nmos.subthreshold_n = n();
    else if (key == "nmos.lambda") t.nmos.lambda_per_v = n();
    else if (key == "pmos.vth0") t.pmos.vth0_v = n();
    else if (key == "pmos.mobility") t.pmos.mobility_m2_vs = n();
    else if (key == "pmos.subthreshold_n") t.pmos.subthreshold_n = n();
    else if (key == "pmos.lambda") t.pmos.lambda_per_v = n();
    else if (key == "oxide_eps_rel") t.oxide_eps_rel = n();
    else if (key == "p_to_n_ratio") t.p_to_n_ratio = n();
    else if (key == "keeper_mult") t.keeper_mult = n();
    else throw ConfigError("config: unknown technology key '" + key + "'");
}

void apply_aging_key(AgingParams& a, const std::string& key, const std::string& val) {
    auto n = [&](void) { return num(val, key); };
    if (key == "tittd") a.tittd_ev = n();
    else if (key == "titce") a.titce = n();
    else if (key == "titfd") a.titfd_nm_per_v = n();
    else if (key == "totfd") a.totfd_nm_per_v = n();
    else if (key == "tottd") a.tottd_nm_k_per_v = n();
    else if (key == "nit") a.nit = n();
    else if (key == "not") a.not_exp = n();
    else if (key == "ot_scale") a.ot_scale_v = n();
    else if (key == "field_scale") a.field_scale = n();
    else throw ConfigError("config: unknown aging key '" + key + "'");
}

void apply_run_key(RunConfig& cfg, const std::string& key, const std::string& val) {
    if (key == "technologies") {
        cfg.mc.technologies.clear();
        for (const auto& s : split_list(val))
            cfg.mc.technologies.push_back(technology_from_string(s));
    } else if (key == "kinds") {
        cfg.mc.kinds.clear();
        for (const auto& s : split_list(val)) {
            if (s.size() != 1) throw ConfigError("config: bad kind '" + s + "'");
            cfg.mc.kinds.push_back(kind_from_letter(s[0]));
        }
    } else if (key == "ages") {
        cfg.mc.ages_years.clear();
        for (const auto& s : split_list(val)) cfg.mc.ages_years.push_back(num(s, key));
    } else if (key == "timing_ages") {
        cfg.timing_ages.clear();
        for (const auto& s : split_list(val)) cfg.timing_ages.push_back(num(s, key));
    } else if (key == "modes") {
        cfg.mc.modes.clear();
        for (const auto& s : split_list(val)) cfg.mc.modes.push_back(slack_mode_from_string(s));
    } else if (key == "trials") {
        cfg.mc.n_trials = static_cast<long>(num(val, key));
    } else if (key == "seed") {
        cfg.mc.seed = static_cast<std::uint64_t>(num(val, key));
    } else if (key == "workers") {
        cfg.mc.workers = static_cast<int>(num(val, key));
    } else if (key == "out") {
        cfg.out_dir = val;
    } else {
        throw ConfigError("config: unknown run key '" + key + "'");
    }
}

void apply_clock_key(CharacterizeSetup& s, const std::string& key, const std::string& val) {
    if (key == "frequency") s.clock_freq_hz = num(val, key);
    else if (key == "edge_time") s.edge_time_s = num(val, key);
    else if (key == "long_slack") s.long_slack_s = num(val, key);
    else if (key == "dt_max") s.dt_max_s = num(val, key);
    else throw ConfigError("config: unknown clock key '" + key + "'");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg = default_run_config();
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "run" && section != "aging" && section != "clock" &&
                section != "tech CMOS16" && section != "tech FINFET16")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section == "run") apply_run_key(cfg, key, val);
        else if (section == "aging") apply_aging_key(cfg.ctx.aging, key, val);
        else if (section == "clock") apply_clock_key(cfg.ctx.setup, key, val);
        else if (section == "tech CMOS16") apply_tech_key(cfg.ctx.cmos, key, val);
        else if (section == "tech FINFET16") apply_tech_key(cfg.ctx.finfet, key, val);
        else
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any section");
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_quick_preset(RunConfig& cfg) {
    cfg.mc.n_trials = 100;
    cfg.mc.ages_years = {0.0, 10.0};
}

} // namespace ffwnm

#include "grcsim/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace grcsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

KvFile KvFile::from_string(const std::string& text, const std::string& name) {
    KvFile kv;
    kv.path_ = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(name + ":" + std::to_string(line_no) + ": unterminated section");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError(name + ":" + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": expected `key = value`");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": empty key");
        }
        if (section.empty()) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": key outside any section");
        }
        const std::string full = section + "." + key;
        if (kv.entries_.count(full)) {
            throw ConfigError(name + ":" + std::to_string(line_no) + ": duplicate key " + full);
        }
        kv.entries_[full] = {value, line_no};
    }
    return kv;
}

KvFile KvFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

const KvFile::Entry* KvFile::find(const std::string& section, const std::string& key) const {
    const auto it = entries_.find(section + "." + key);
    return it == entries_.end() ? nullptr : &it->second;
}

bool KvFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string KvFile::get_string(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError(path_ + ": missing required key " + section + "." + key);
    consumed_.insert(section + "." + key);
    return e->value;
}

double KvFile::get_real(const std::string& section, const std::string& key) {
    const std::string v = get_string(section, key);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
        fail(section, key, "expected a real number, got `" + v + "`");
    }
    return out;
}

long KvFile::get_int(const std::string& section, const std::string& key) {
    const std::string v = get_string(section, key);
    char* end = nullptr;
    const long out = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
        fail(section, key, "expected an integer, got `" + v + "`");
    }
    return out;
}

std::optional<std::string> KvFile::opt_string(const std::string& section, const std::string& key) {
    if (!has(section, key)) return std::nullopt;
    return get_string(section, key);
}

std::optional<double> KvFile::opt_real(const std::string& section, const std::string& key) {
    if (!has(section, key)) return std::nullopt;
    return get_real(section, key);
}

std::optional<long> KvFile::opt_int(const std::string& section, const std::string& key) {
    if (!has(section, key)) return std::nullopt;
    return get_int(section, key);
}

void KvFile::finish() const {
    for (const auto& [full, entry] : entries_) {
        if (!consumed_.count(full)) {
            throw ConfigError(path_ + ":" + std::to_string(entry.line) + ": unknown key " + full);
        }
    }
}

void KvFile::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
    const Entry* e = find(section, key);
    const std::string where =
        e ? path_ + ":" + std::to_string(e->line) : path_;
    throw ConfigError(where + ": " + section + "." + key + ": " + message);
}

// ---------------------------------------------------------------------------
// Plant parameter files
// ---------------------------------------------------------------------------

void load_plant_params(const std::string& path, PlantFamily family, PlantParams& params) {
    KvFile kv = KvFile::load(path);
    const std::string sec = family_name(family);
    auto real = [&](const char* key, double& target) {
        if (auto v = kv.opt_real(sec, key)) target = *v;
    };
    switch (family) {
        case PlantFamily::UniversalMotorEda: {
            auto& p = params.universal;
            real("R_a", p.R_a);
            real("R_f", p.R_f);
            real("L_a", p.L_a);
            real("L_f", p.L_f);
            real("phi_m", p.phi_m);
            real("J_m", p.J_m);
            real("b_m", p.b_m);
            real("tau_fs", p.tau_fs);
            real("v_ref", p.v_ref);
            p.validate();
            break;
        }
        case PlantFamily::PmsmEda: {
            auto& p = params.pmsm;
            real("R_s", p.R_s);
            real("L_d", p.L_d);
            real("L_q", p.L_q);
            real("phi_m", p.phi_m);
            if (auto v = kv.opt_int(sec, "n_p")) p.n_p = static_cast<int>(*v);
            real("J_eq", p.J_eq);
            real("b_eq", p.b_eq);
            real("k_eq", p.k_eq);
            real("f_eq", p.f_eq);
            real("delta_R_s", p.delta_R_s);
            real("delta_L_d", p.delta_L_d);
            real("delta_L_q", p.delta_L_q);
            real("delta_phi_m", p.delta_phi_m);
            real("delta_J", p.delta_J);
            p.validate();
            break;
        }
        case PlantFamily::HdaCylinder: {
            auto& p = params.hda_cylinder;
            real("V_1", p.V_1);
            real("V_2", p.V_2);
            real("beta_e", p.beta_e);
            real("A_h", p.A_h);
            real("C_t", p.C_t);
            real("k_u", p.k_u);
            real("P_s", p.P_s);
            real("P_r", p.P_r);
            real("J_h", p.J_h);
            real("D_h", p.D_h);
            real("b_h", p.b_h);
            real("A_f", p.A_f);
            real("v_ref", p.v_ref);
            p.validate();
            break;
        }
        case PlantFamily::HdaMotorWithValve: {
            auto& p = params.hda_motor;
            real("tau_v", p.tau_v);
            real("W", p.W);
            real("K_v", p.K_v);
            real("C_d", p.C_d);
            real("rho", p.rho);
            real("V", p.V);
            real("beta_e", p.beta_e);
            real("D_eh", p.D_eh);
            real("C_t", p.C_t);
            real("J_eh", p.J_eh);
            real("b_eh", p.b_eh);
            real("P_s", p.P_s);
            p.validate();
            break;
        }
        case PlantFamily::PdaLinearized: {
            auto& p = params.pda;
            real("a_1", p.a_1);
            real("a_2", p.a_2);
            real("a_3", p.a_3);
            real("b", p.b);
            real("delta_u", p.delta_u);
            real("d", p.d);
            p.validate();
            break;
        }
    }
    kv.finish();
}

}  // namespace grcsim

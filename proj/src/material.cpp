#include "qppf/material.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qppf/constants.hpp"

namespace qppf::material {

using constants::eps0;
using constants::pi;

namespace {

struct Line {
    int number;
    std::string text;
};

// Strips comments/whitespace; returns the non-empty payload lines.
std::vector<Line> read_payload_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::vector<Line> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto first = raw.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        auto last = raw.find_last_not_of(" \t\r\n");
        lines.push_back({number, raw.substr(first, last - first + 1)});
    }
    return lines;
}

bool parse_key_value(const std::string& text, std::string& key, std::string& value) {
    auto eq = text.find('=');
    if (eq == std::string::npos) return false;
    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t");
        if (a == std::string::npos) return std::string();
        auto b = s.find_last_not_of(" \t");
        return s.substr(a, b - a + 1);
    };
    key = trim(text.substr(0, eq));
    value = trim(text.substr(eq + 1));
    return !key.empty() && !value.empty();
}

// Parses "number [unit]" where the unit token, if present, must be one of the
// accepted spellings for the key.
double parse_quantity(const std::string& path, int line, const std::string& value,
                      std::initializer_list<std::pair<const char*, double>> units) {
    std::istringstream ss(value);
    double x;
    if (!(ss >> x))
        throw ParseError(path + ":" + std::to_string(line) + ": expected a number, got '" + value + "'");
    std::string unit;
    ss >> unit;
    if (unit.empty()) return x;
    for (const auto& [name, factor] : units)
        if (unit == name) return x * factor;
    throw ParseError(path + ":" + std::to_string(line) + ": unexpected unit '" + unit + "'");
}

} // namespace

void Material::validate() const {
    if (!(density > 0.0)) throw ParseError(name + ": density must be > 0");
    if (!(specific_heat > 0.0)) throw ParseError(name + ": specific_heat must be > 0");
    if (!(ionization_energy > 0.0)) throw ParseError(name + ": ionization_energy must be > 0");
    if (omega.size() < 2) throw ParseError(name + ": permittivity table needs at least 2 rows");
    for (size_t i = 1; i < omega.size(); ++i)
        if (!(omega[i] > omega[i - 1]))
            throw ParseError(name + ": permittivity table omega must be strictly increasing");
    for (double e : eps_im)
        if (e < 0.0) throw ParseError(name + ": eps_im must be >= 0 for a passive medium");
}

void GasSpecies::validate() const {
    if (!(mass > 0.0 && polarizability_volume > 0.0 && ionization_energy > 0.0))
        throw ParseError(name + ": all gas properties must be > 0");
}

Material load_material(const std::string& path) {
    Material m;
    for (const auto& line : read_payload_lines(path)) {
        std::string key, value;
        if (parse_key_value(line.text, key, value)) {
            if (key == "name")
                m.name = value;
            else if (key == "density")
                m.density = parse_quantity(path, line.number, value, {{"kg/m^3", 1.0}});
            else if (key == "specific_heat")
                m.specific_heat = parse_quantity(path, line.number, value, {{"J/(kg*K)", 1.0}});
            else if (key == "ionization_energy")
                m.ionization_energy =
                    parse_quantity(path, line.number, value, {{"J", 1.0}, {"eV", 1.602176634e-19}});
            else
                throw ParseError(path + ":" + std::to_string(line.number) + ": unknown key '" + key + "'");
            continue;
        }
        // data row: omega eps_re eps_im
        std::istringstream ss(line.text);
        double w, er, ei;
        if (!(ss >> w >> er >> ei))
            throw ParseError(path + ":" + std::to_string(line.number) + ": malformed table row '" +
                             line.text + "'");
        std::string extra;
        if (ss >> extra)
            throw ParseError(path + ":" + std::to_string(line.number) + ": trailing content '" + extra + "'");
        if (!m.omega.empty() && !(w > m.omega.back()))
            throw ParseError(path + ":" + std::to_string(line.number) + ": omega not strictly increasing");
        if (ei < 0.0)
            throw ParseError(path + ":" + std::to_string(line.number) + ": negative eps_im");
        m.omega.push_back(w);
        m.eps_re.push_back(er);
        m.eps_im.push_back(ei);
    }
    if (m.name.empty()) m.name = path;
    m.validate();
    return m;
}

GasSpecies load_gas(const std::string& path) {
    GasSpecies g;
    for (const auto& line : read_payload_lines(path)) {
        std::string key, value;
        if (!parse_key_value(line.text, key, value))
            throw ParseError(path + ":" + std::to_string(line.number) + ": expected key = value");
        if (key == "name")
            g.name = value;
        else if (key == "mass")
            g.mass = parse_quantity(path, line.number, value, {{"kg", 1.0}, {"amu", constants::amu}});
        else if (key == "polarizability_volume")
            g.polarizability_volume = parse_quantity(path, line.number, value, {{"m^3", 1.0}});
        else if (key == "ionization_energy")
            g.ionization_energy =
                parse_quantity(path, line.number, value, {{"J", 1.0}, {"eV", 1.602176634e-19}});
        else
            throw ParseError(path + ":" + std::to_string(line.number) + ": unknown key '" + key + "'");
    }
    if (g.name.empty()) g.name = path;
    g.validate();
    return g;
}

std::complex<double> permittivity(const Material& m, double omega, bool* clamped) {
    if (clamped) *clamped = false;
    if (!std::isfinite(omega) || omega < 0.0)
        throw DomainError(m.name + ": bad frequency for permittivity lookup");
    if (omega <= m.omega.front() || omega >= m.omega.back()) {
        bool at_edge = omega == m.omega.front() || omega == m.omega.back();
        if (!at_edge) {
            if (!m.clamp_out_of_range)
                throw DomainError(m.name + ": frequency outside permittivity table");
            if (clamped) *clamped = true;
        }
        size_t i = omega <= m.omega.front() ? 0 : m.omega.size() - 1;
        return {m.eps_re[i], m.eps_im[i]};
    }
    auto it = std::upper_bound(m.omega.begin(), m.omega.end(), omega);
    size_t hi = static_cast<size_t>(it - m.omega.begin());
    size_t lo = hi - 1;
    double t = (omega - m.omega[lo]) / (m.omega[hi] - m.omega[lo]);
    return {m.eps_re[lo] + t * (m.eps_re[hi] - m.eps_re[lo]),
            m.eps_im[lo] + t * (m.eps_im[hi] - m.eps_im[lo])};
}

std::complex<double> clausius_mossotti(const Material& m, double omega, double radius) {
    if (!(radius > 0.0)) throw DomainError("clausius_mossotti: radius must be > 0");
    std::complex<double> eps = permittivity(m, omega);
    if (std::abs(eps + 2.0) < 1e-12)
        throw DomainError(m.name + ": Clausius-Mossotti singularity (eps = -2)");
    return 4.0 * pi * eps0 * radius * radius * radius * (eps - 1.0) / (eps + 2.0);
}

std::complex<double> static_polarizability(const Material& m, double radius) {
    return clausius_mossotti(m, m.omega.front(), radius);
}

double c6_coefficient(const Material& m, double radius, const GasSpecies& gas) {
    double alpha = static_polarizability(m, radius).real(); // SI units
    double alpha_g = 4.0 * pi * eps0 * gas.polarizability_volume;
    double I = m.ionization_energy;
    double Ig = gas.ionization_energy;
    return 3.0 * alpha * alpha_g * I * Ig / (32.0 * pi * pi * eps0 * eps0 * (I + Ig));
}

} // namespace qppf::material

#pragma once

#include <cmath>
#include <memory>

#include "qppf/constants.hpp"
#include "qppf/errors.hpp"
#include "qppf/material.hpp"

// Experiment description records shared across the physics modules. All
// values SI. Instances are immutable by convention once handed to a
// calculator; they are cheap to copy.
namespace qppf {

struct ParticleSpec {
    enum class TempModel { kConstant, kRadiative };

    double radius = 0.0; // m
    std::shared_ptr<const material::Material> mat;
    TempModel temp_model = TempModel::kConstant;
    double internal_temperature = 40.0; // K, T_int at release

    double mass() const {
        return 4.0 / 3.0 * constants::pi * radius * radius * radius * mat->density;
    }

    void validate() const {
        if (!(radius > 0.0)) throw DomainError("ParticleSpec: radius must be > 0");
        if (!mat) throw DomainError("ParticleSpec: material not set");
        if (!(internal_temperature > 0.0))
            throw DomainError("ParticleSpec: internal temperature must be > 0");
    }

    static ParticleSpec from_mass(double mass_kg,
                                  std::shared_ptr<const material::Material> mat,
                                  TempModel model = TempModel::kConstant,
                                  double t_int = 40.0) {
        ParticleSpec p;
        p.mat = std::move(mat);
        if (!p.mat) throw DomainError("ParticleSpec: material not set");
        p.radius = std::cbrt(3.0 * mass_kg / (4.0 * constants::pi * p.mat->density));
        p.temp_model = model;
        p.internal_temperature = t_int;
        return p;
    }
};

struct GratingSpec {
    double wavelength = 100e-9;       // m
    double fluence = 0.0;             // J/m^2, E_L/a_L
    double intensity_parameter = 1e9; // W/m^2, I0 (the eikonal phase is I0-independent)

    double period() const { return 0.5 * wavelength; }
    double wavenumber() const { return 2.0 * constants::pi / wavelength; }

    void validate() const {
        if (!(wavelength > 0.0)) throw DomainError("GratingSpec: wavelength must be > 0");
        if (fluence < 0.0) throw DomainError("GratingSpec: fluence must be >= 0");
        if (!(intensity_parameter > 0.0))
            throw DomainError("GratingSpec: intensity parameter must be > 0");
    }
};

struct EnvironmentSpec {
    double temperature = 20.0; // K
    double pressure = 0.0;     // Pa
    material::GasSpecies gas;

    // Table convention v_g = sqrt(2 k_B T / m_g).
    double gas_mean_velocity() const {
        return std::sqrt(2.0 * constants::k_boltzmann * temperature / gas.mass);
    }

    void validate() const {
        if (!(temperature > 0.0)) throw DomainError("EnvironmentSpec: temperature must be > 0");
        if (pressure < 0.0) throw DomainError("EnvironmentSpec: pressure must be >= 0");
        gas.validate();
    }
};

struct ProtocolSpec {
    double t1 = 0.0;                // s, free fall before the grating
    double t2 = 0.0;                // s, free fall after the grating
    double trap_frequency = 1e5 / (2.0 * constants::pi); // Hz, nu_m
    double com_temperature = 5e-6;  // K, post-cooling c.o.m. temperature
    bool mission_constrained = false; // enforce t1 + t2 <= 100 s

    void validate() const {
        if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("ProtocolSpec: t1, t2 must be > 0");
        if (mission_constrained && t1 + t2 > 100.0 + 1e-9)
            throw DomainError("ProtocolSpec: t1 + t2 exceeds the 100 s mission constraint");
        if (!(trap_frequency > 0.0) || !(com_temperature > 0.0))
            throw DomainError("ProtocolSpec: trap frequency and temperature must be > 0");
    }
};

struct CslParams {
    double lambda = 0.0; // 1/s, collapse rate
    double rc = 1e-7;    // m, localization length

    void validate() const {
        if (lambda < 0.0 || !(rc > 0.0)) throw DomainError("CslParams: invalid parameters");
    }
};

struct DpParams {
    // Experimental floor on the DP resolution parameter.
    static constexpr double kR0Floor = 0.5e-10;
    double r0 = kR0Floor; // m

    void validate(bool enforce_floor = true) const {
        if (!(r0 > 0.0)) throw DomainError("DpParams: R0 must be > 0");
        if (enforce_floor && r0 < kR0Floor - 1e-18)
            throw DomainError("DpParams: R0 below the experimental floor");
    }
};

} // namespace qppf

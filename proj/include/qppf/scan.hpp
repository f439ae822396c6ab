#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qppf/metrics.hpp"
#include "qppf/pattern.hpp"

// Deterministic, resumable parameter scans: distinguishability maximization
// over (t1, t2, fluence) and exclusion-curve solving over (r_c, lambda).
// Cells are evaluated by a worker pool; results are merged by cell index so
// outputs are bitwise reproducible for any worker count.
namespace qppf::scan {

struct ScanGrid {
    std::vector<double> t1_values;      // s, strictly increasing
    std::vector<double> t2_values;      // s, strictly increasing
    std::vector<double> fluence_values; // J/m^2, strictly increasing
    double t_max = 100.0;               // triangle constraint t1 + t2 <= t_max

    void validate() const;
    static std::vector<double> linear(double lo, double hi, int n);
    static std::vector<double> logarithmic(double lo, double hi, int n);
};

enum class Target { kQc, kQcsl };

struct CellResult {
    int index = -1;
    double t1 = 0.0, t2 = 0.0, fluence = 0.0;
    double aleph_qc = 0.0, aleph_qcsl = 0.0;
    bool ok = false;
    std::string error;
};

struct ScanResult {
    std::vector<CellResult> cells; // canonical (t1, t2, fluence) order
    int best_index = -1;           // deterministic argmax of the target
    int failed = 0;
    double best_value = 0.0;
};

struct ScanSetup {
    ParticleSpec particle;
    GratingSpec grating;
    EnvironmentSpec environment;
    ProtocolSpec protocol_base;   // trap frequency / c.o.m. temperature
    CslParams csl{1e-8, 1e-7};    // collapse point for aleph_QCSL
    Target target = Target::kQc;
    int workers = 1;
    std::string checkpoint_path;  // append-only cell records; empty disables
    double window = metrics::kDefaultWindow;
    int samples = 512;
};

// Evaluates every feasible grid cell; per-cell failures are recorded and the
// scan continues. The caller decides what to do when failures exceed the
// tolerated fraction (see failure_fraction).
ScanResult optimize_aleph(const ScanGrid& grid, const ScanSetup& setup);

double failure_fraction(const ScanResult& r);

struct ExclusionCurve {
    std::vector<double> rc;
    std::vector<double> lambda_min;
    std::vector<std::string> status; // "ok" or "unreachable"
    double threshold = metrics::kDiscriminationThreshold;
    std::string protocol_digest;
};

// Per r_c, the smallest lambda whose CSL pattern is distinguishable from the
// quantum one (aleph_QCSL >= threshold): coarse first-crossing pre-scan on
// log lambda in [1e-20, 1e-2], then bisection.
ExclusionCurve exclusion_curve(const std::vector<double>& rc_grid, double threshold,
                               const ScanSetup& setup, const ProtocolSpec& protocol);

void write_scan_csv(std::ostream& os, const ScanResult& r);
void write_exclusion_csv(std::ostream& os, const ExclusionCurve& c);

} // namespace qppf::scan

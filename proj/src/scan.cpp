#include "qppf/scan.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qppf::scan {

void ScanGrid::validate() const {
    auto increasing = [](const std::vector<double>& v) {
        if (v.empty()) return false;
        for (size_t i = 1; i < v.size(); ++i)
            if (!(v[i] > v[i - 1])) return false;
        return true;
    };
    if (!increasing(t1_values) || !increasing(t2_values) || !increasing(fluence_values))
        throw DomainError("ScanGrid: axes must be non-empty and strictly increasing");
    for (double f : fluence_values)
        if (f < 1e-6 - 1e-18 || f > 5.0 + 1e-12)
            throw DomainError("ScanGrid: fluence outside the feasible scan range [1e-6, 5]");
    bool any = false;
    for (double t1 : t1_values)
        for (double t2 : t2_values)
            if (t1 + t2 <= t_max + 1e-12) any = true;
    if (!any) throw DomainError("ScanGrid: no cell satisfies the t1 + t2 constraint");
}

std::vector<double> ScanGrid::linear(double lo, double hi, int n) {
    if (n < 1 || !(hi > lo)) throw DomainError("ScanGrid::linear: bad range");
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = lo + (hi - lo) * i / std::max(1, n - 1);
    return v;
}

std::vector<double> ScanGrid::logarithmic(double lo, double hi, int n) {
    if (n < 1 || !(hi > lo) || !(lo > 0.0)) throw DomainError("ScanGrid::logarithmic: bad range");
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / std::max(1, n - 1));
    return v;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CheckpointWriter {
    explicit CheckpointWriter(const std::string& path) {
        if (!path.empty()) out.open(path, std::ios::app);
    }
    void record(const CellResult& c) {
        if (!out.is_open()) return;
        std::lock_guard<std::mutex> lock(mtx);
        out << c.index << ',' << format_double(c.t1) << ',' << format_double(c.t2) << ','
            << format_double(c.fluence) << ',' << format_double(c.aleph_qc) << ','
            << format_double(c.aleph_qcsl) << ',' << (c.ok ? "ok" : "failed") << '\n';
        out.flush();
    }
    std::ofstream out;
    std::mutex mtx;
};

// Completed cells from a previous interrupted run.
std::vector<CellResult> read_checkpoint(const std::string& path) {
    std::vector<CellResult> done;
    if (path.empty()) return done;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        CellResult c;
        char status[16] = {0};
        if (std::sscanf(line.c_str(), "%d,%lg,%lg,%lg,%lg,%lg,%15s", &c.index, &c.t1, &c.t2,
                        &c.fluence, &c.aleph_qc, &c.aleph_qcsl, status) == 7) {
            c.ok = std::string(status) == "ok";
            done.push_back(c);
        }
    }
    return done;
}

} // namespace

ScanResult optimize_aleph(const ScanGrid& grid, const ScanSetup& setup) {
    grid.validate();
    if (setup.workers < 1) throw DomainError("optimize_aleph: workers must be >= 1");

    // canonical feasible-cell enumeration: t1-major, then t2, then fluence
    std::vector<CellResult> cells;
    for (double t1 : grid.t1_values)
        for (double t2 : grid.t2_values) {
            if (t1 + t2 > grid.t_max + 1e-12) continue;
            for (double f : grid.fluence_values) {
                CellResult c;
                c.index = static_cast<int>(cells.size());
                c.t1 = t1;
                c.t2 = t2;
                c.fluence = f;
                cells.push_back(c);
            }
        }

    pattern::PatternBuilder builder(setup.particle, setup.grating, setup.environment);

    std::vector<char> completed(cells.size(), 0);
    for (const CellResult& c : read_checkpoint(setup.checkpoint_path)) {
        if (c.index < 0 || c.index >= static_cast<int>(cells.size())) continue;
        // accept only records matching the current grid geometry
        CellResult& slot = cells[static_cast<size_t>(c.index)];
        if (slot.t1 != c.t1 || slot.t2 != c.t2 || slot.fluence != c.fluence) continue;
        slot = c;
        completed[static_cast<size_t>(c.index)] = 1;
    }

    CheckpointWriter writer(setup.checkpoint_path);

    auto evaluate = [&](CellResult& c) {
        try {
            ProtocolSpec pr = setup.protocol_base;
            pr.t1 = c.t1;
            pr.t2 = c.t2;
            double lo = -0.5 * setup.window * 1.2, hi = 0.5 * setup.window * 1.2;
            auto q = builder.compute(pattern::Kind::kQuantum, pr, std::nullopt, lo, hi,
                                     setup.samples, c.fluence);
            auto cl = builder.compute(pattern::Kind::kClassical, pr, std::nullopt, lo, hi,
                                      setup.samples, c.fluence);
            auto cs = builder.compute(pattern::Kind::kCsl, pr, setup.csl, lo, hi,
                                      setup.samples, c.fluence);
            c.aleph_qc = metrics::aleph(q, cl, setup.window).value;
            c.aleph_qcsl = metrics::aleph(q, cs, setup.window).value;
            c.ok = true;
        } catch (const std::exception& e) {
            c.ok = false;
            c.error = e.what();
        }
        writer.record(c);
    };

    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            if (completed[i]) continue;
            evaluate(cells[i]);
        }
    };
    if (setup.workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < setup.workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ScanResult result;
    result.cells = std::move(cells);
    for (const CellResult& c : result.cells) {
        if (!c.ok) {
            ++result.failed;
            continue;
        }
        double value = setup.target == Target::kQc ? c.aleph_qc : c.aleph_qcsl;
        // strict inequality keeps the smallest (t1, t2, fluence) on ties
        if (result.best_index < 0 || value > result.best_value) {
            result.best_index = c.index;
            result.best_value = value;
        }
    }
    return result;
}

double failure_fraction(const ScanResult& r) {
    if (r.cells.empty()) return 0.0;
    return static_cast<double>(r.failed) / static_cast<double>(r.cells.size());
}

ExclusionCurve exclusion_curve(const std::vector<double>& rc_grid, double threshold,
                               const ScanSetup& setup, const ProtocolSpec& protocol) {
    if (threshold < 0.0) throw DomainError("exclusion_curve: threshold must be >= 0");
    pattern::PatternBuilder builder(setup.particle, setup.grating, setup.environment);
    double lo = -0.5 * setup.window * 1.2, hi = 0.5 * setup.window * 1.2;
    auto quantum = builder.compute(pattern::Kind::kQuantum, protocol, std::nullopt, lo, hi,
                                   setup.samples);

    ExclusionCurve curve;
    curve.threshold = threshold;
    {
        std::ostringstream d;
        d << "m=" << setup.particle.mass() << " t1=" << protocol.t1 << " t2=" << protocol.t2
          << " fluence=" << setup.grating.fluence;
        curve.protocol_digest = d.str();
    }

    const double lambda_lo = 1e-20, lambda_hi = 1e-2;
    const int prescan = 40, bisections = 40;

    for (double rc : rc_grid) {
        auto aleph_at = [&](double lambda) {
            auto cs = builder.compute(pattern::Kind::kCsl, protocol, CslParams{lambda, rc}, lo,
                                      hi, setup.samples);
            return metrics::aleph(quantum, cs, setup.window).value;
        };

        curve.rc.push_back(rc);
        if (threshold <= 0.0 || aleph_at(lambda_lo) >= threshold) {
            curve.lambda_min.push_back(lambda_lo);
            curve.status.push_back("ok");
            continue;
        }
        // first crossing on a log grid (conservative when non-monotone)
        double prev = lambda_lo;
        double found_lo = 0.0, found_hi = 0.0;
        for (int i = 1; i <= prescan; ++i) {
            double lam = lambda_lo * std::pow(lambda_hi / lambda_lo,
                                              static_cast<double>(i) / prescan);
            if (aleph_at(lam) >= threshold) {
                found_lo = prev;
                found_hi = lam;
                break;
            }
            prev = lam;
        }
        if (found_hi == 0.0) {
            curve.lambda_min.push_back(std::nan(""));
            curve.status.push_back("unreachable");
            continue;
        }
        for (int i = 0; i < bisections; ++i) {
            double mid = std::sqrt(found_lo * found_hi);
            if (aleph_at(mid) >= threshold)
                found_hi = mid;
            else
                found_lo = mid;
        }
        curve.lambda_min.push_back(found_hi);
        curve.status.push_back("ok");
    }
    return curve;
}

void write_scan_csv(std::ostream& os, const ScanResult& r) {
    os << "t1_s,t2_s,fluence_J_per_m2,aleph_qc,aleph_qcsl\n";
    for (const CellResult& c : r.cells) {
        if (!c.ok) continue;
        os << format_double(c.t1) << ',' << format_double(c.t2) << ','
           << format_double(c.fluence) << ',' << format_double(c.aleph_qc) << ','
           << format_double(c.aleph_qcsl) << '\n';
    }
}

void write_exclusion_csv(std::ostream& os, const ExclusionCurve& c) {
    os << "r_c_m,lambda_min_per_s,status\n";
    for (size_t i = 0; i < c.rc.size(); ++i) {
        os << format_double(c.rc[i]) << ',';
        if (c.status[i] == "ok")
            os << format_double(c.lambda_min[i]);
        else
            os << "nan";
        os << ',' << c.status[i] << '\n';
    }
}

} // namespace qppf::scan

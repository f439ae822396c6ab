#include "qppf/metrics.hpp"

#include <cmath>

namespace qppf::metrics {

MetricResult aleph(const pattern::Pattern& p1, const pattern::Pattern& p2, double window) {
    if (!(window > 0.0)) throw DomainError("aleph: window must be > 0");
    if (p1.z.size() != p2.z.size() || p1.z.size() < 2)
        throw InterfaceError("aleph: patterns must share their z grid");
    for (size_t i = 0; i < p1.z.size(); ++i)
        if (std::abs(p1.z[i] - p2.z[i]) > 1e-15 * (std::abs(p1.z[i]) + 1e-300) + 1e-30)
            throw InterfaceError("aleph: patterns must share their z grid");
    double lo = -0.5 * window, hi = 0.5 * window;
    if (p1.z.front() > lo + 1e-18 || p1.z.back() < hi - 1e-18)
        throw InterfaceError("aleph: pattern grid does not cover the metric window");

    auto integrand = [&](size_t i) {
        double num = std::abs(p1.values[i] - p2.values[i]);
        double den = std::abs(p1.values[i] + p2.values[i]);
        if (den == 0.0) throw DomainError("aleph: degenerate input (zero density sum)");
        return num / den;
    };

    // trapezoid over grid points inside the window, with linear end
    // corrections at the exact window boundaries
    double acc = 0.0;
    size_t n = p1.z.size();
    size_t first = 0;
    while (first + 1 < n && p1.z[first + 1] <= lo) ++first;
    size_t last = n - 1;
    while (last > 0 && p1.z[last - 1] >= hi) --last;

    auto lerp_at = [&](size_t i, double zq) {
        double t = (zq - p1.z[i]) / (p1.z[i + 1] - p1.z[i]);
        return integrand(i) + t * (integrand(i + 1) - integrand(i));
    };

    double z_prev = lo;
    double f_prev = p1.z[first] >= lo ? integrand(first) : lerp_at(first, lo);
    for (size_t i = first; i <= last; ++i) {
        double zi = p1.z[i];
        if (zi <= z_prev) continue;
        if (zi > hi) break;
        double fi = integrand(i);
        acc += 0.5 * (f_prev + fi) * (zi - z_prev);
        z_prev = zi;
        f_prev = fi;
    }
    if (z_prev < hi) {
        double f_hi = lerp_at(last - (p1.z[last] > hi ? 1 : 0), hi);
        // the guard above keeps the index valid when the last grid point
        // coincides with or exceeds the window edge
        acc += 0.5 * (f_prev + f_hi) * (hi - z_prev);
    }

    MetricResult r;
    r.value = acc / window;
    r.window = window;
    r.samples = static_cast<int>(n);
    r.first = p1.kind;
    r.second = p2.kind;
    return r;
}

} // namespace qppf::metrics

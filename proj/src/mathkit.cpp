#include "qppf/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <queue>

#include "qppf/constants.hpp"

namespace qppf::mathkit {

using constants::pi;

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw DomainError("QuadratureSpec: tolerances must be > 0");
    if (max_subdivisions < 1)
        throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

// ---------------------------------------------------------------------------
// Bessel J_n
// ---------------------------------------------------------------------------

namespace {

// Series around x = 0; adequate for |x| <= ~2 at modest order.
double bessel_j_series(int n, double x) {
    double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= half / k; // (x/2)^n / n!
    double sum = term;
    double x2 = -half * half;
    for (int m = 1; m < 60; ++m) {
        term *= x2 / (m * (m + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace

double bessel_j(int order, double x) {
    if (!std::isfinite(x)) throw DomainError("bessel_j: non-finite argument");
    if (std::abs(order) > 10000) throw DomainError("bessel_j: order out of range");

    // Reduce to n >= 0, x >= 0 via J_{-n}(x) = (-1)^n J_n(x), J_n(-x) = (-1)^n J_n(x).
    double sign = 1.0;
    int n = order;
    if (n < 0) {
        n = -n;
        if (n & 1) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n & 1) sign = -sign;
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x < 2.0 && n < 30) return sign * bessel_j_series(n, x);

    // Large argument, order well below the turning point: Hankel asymptotic
    // expansion (phase-amplitude form); far cheaper than the recurrence.
    // Expansion parameter (mu - 1)/(8x) kept below 0.05.
    if (x > 60.0 && 4.0 * static_cast<double>(n) * n - 1.0 < 0.4 * x) {
        double mu = 4.0 * static_cast<double>(n) * n;
        double p = 1.0, q = 0.0;
        double term = 1.0;
        double x8 = 8.0 * x;
        // P ~ sum (-1)^k a_{2k}/x^{2k}, Q ~ sum (-1)^k a_{2k+1}/x^{2k+1}
        double a = (mu - 1.0) / x8;
        q = a;
        term = a;
        double f2 = (mu - 9.0) / (2.0 * x8);
        term *= f2;
        p -= term; // a2
        term *= (mu - 25.0) / (3.0 * x8);
        q -= term; // a3
        term *= (mu - 49.0) / (4.0 * x8);
        p += term; // a4
        term *= (mu - 81.0) / (5.0 * x8);
        q += term; // a5
        term *= (mu - 121.0) / (6.0 * x8);
        p -= term; // a6
        double chi = x - (0.5 * n + 0.25) * pi;
        return sign * std::sqrt(2.0 / (pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
    }

    // Miller downward recurrence with J_0 + 2*sum_{k>=1} J_{2k} = 1.
    int mx = std::max(n, static_cast<int>(std::ceil(x)));
    int start = mx + 18 + static_cast<int>(3.0 * std::sqrt(static_cast<double>(mx)));
    if (start & 1) ++start; // even start keeps the normalization bookkeeping simple

    double jp = 0.0;        // J_{k+1}
    double jc = 1e-290;     // J_k (arbitrary seed)
    double norm = 0.0;      // accumulates J_0 + 2 sum J_{2k}
    double result = (n == start) ? jc : 0.0;
    for (int k = start; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp; // J_{k-1}
        jp = jc;
        jc = jm;
        if (((k - 1) & 1) == 0) norm += (k == 1) ? jc : 2.0 * jc;
        if (k - 1 == n) result = jc;
        if (std::abs(jc) > 1e250) { // rescale to avoid overflow
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    return sign * result / norm;
}

double spherical_j(int l, double x) {
    std::vector<double> buf;
    fill_spherical_j(l, x, buf);
    return buf[static_cast<size_t>(l)];
}

void fill_spherical_j(int lmax, double x, std::vector<double>& out) {
    if (lmax < 0) throw DomainError("fill_spherical_j: lmax must be >= 0");
    if (!std::isfinite(x) || x < 0.0) throw DomainError("fill_spherical_j: bad argument");
    out.assign(static_cast<size_t>(lmax) + 1, 0.0);

    if (x < 1e-8) {
        // j_l(x) ~ x^l / (2l+1)!!
        double v = 1.0 - x * x / 6.0;
        for (int l = 0; l <= lmax; ++l) {
            out[static_cast<size_t>(l)] = v;
            v *= x / (2.0 * l + 3.0);
        }
        return;
    }

    double j0 = std::sin(x) / x;
    if (lmax == 0) {
        out[0] = j0;
        return;
    }
    double j1 = j0 / x - std::cos(x) / x;

    if (x > lmax + 2) {
        // upward recurrence, stable for x above the turning point
        out[0] = j0;
        out[1] = j1;
        for (int l = 2; l <= lmax; ++l)
            out[static_cast<size_t>(l)] =
                (2.0 * l - 1.0) / x * out[static_cast<size_t>(l - 1)] - out[static_cast<size_t>(l - 2)];
        return;
    }

    // downward recurrence from above, normalized by j_0
    int start = lmax + 16 + static_cast<int>(2.0 * std::sqrt(static_cast<double>(lmax) + x));
    double fp = 0.0, fc = 1e-290;
    std::vector<double> tmp(static_cast<size_t>(lmax) + 1, 0.0);
    for (int l = start; l >= 1; --l) {
        double fm = (2.0 * l + 1.0) / x * fc - fp;
        fp = fc;
        fc = fm;
        if (l - 1 <= lmax) tmp[static_cast<size_t>(l - 1)] = fc;
        if (std::abs(fc) > 1e250) {
            fc *= 1e-250;
            fp *= 1e-250;
            for (auto& t : tmp) t *= 1e-250;
        }
    }
    double scale = j0 / tmp[0];
    for (int l = 0; l <= lmax; ++l) out[static_cast<size_t>(l)] = tmp[static_cast<size_t>(l)] * scale;
}

// ---------------------------------------------------------------------------
// Sine integral
// ---------------------------------------------------------------------------

namespace {

double si_series(double x) {
    // Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
    double term = x; // (-1)^k x^(2k+1) / (2k+1)!
    double sum = x;
    double x2 = x * x;
    for (int k = 1; k < 80; ++k) {
        int m = 2 * k + 1;
        term *= -x2 / ((m - 1) * m);
        sum += term / m;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// E1(z) by modified Lentz continued fraction; valid away from the negative
// real axis, used here on the positive imaginary axis.
std::complex<double> expint_e1_cf(std::complex<double> z) {
    const double tiny = 1e-300;
    std::complex<double> b = z + 1.0;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i <= 400; ++i) {
        double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) return h * std::exp(-z);
    }
    throw ConvergenceError("expint_e1_cf: continued fraction did not converge",
                           std::abs(h), 1.0);
}

double si_asymptotic(double x) {
    // Si(x) = pi/2 - f(x) cos x - g(x) sin x with asymptotic f, g.
    double f = 0.0, g = 0.0;
    double fk = 1.0 / x;           // (2m)!/x^(2m+1), m = 0
    double gk = 1.0 / (x * x);     // (2m+1)!/x^(2m+2), m = 0
    double s = 1.0;
    int mmax = static_cast<int>(x / 2.0);
    for (int m = 0; m < std::min(mmax, 40); ++m) {
        f += s * fk;
        g += s * gk;
        fk *= (2.0 * m + 1.0) * (2.0 * m + 2.0) / (x * x);
        gk *= (2.0 * m + 2.0) * (2.0 * m + 3.0) / (x * x);
        s = -s;
    }
    return 0.5 * pi - f * std::cos(x) - g * std::sin(x);
}

} // namespace

double sine_integral(double x) {
    if (!std::isfinite(x)) throw DomainError("sine_integral: non-finite argument");
    if (x < 0.0) return -sine_integral(-x);
    if (x <= 12.0) return si_series(x);
    if (x <= 700.0) {
        // Si(x) = pi/2 + Im E1(ix) for this branch of E1
        std::complex<double> e1 = expint_e1_cf(std::complex<double>(0.0, x));
        return 0.5 * pi + e1.imag();
    }
    return si_asymptotic(x);
}

double sine_integral_over_x(double x) {
    double ax = std::abs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 18.0 + x2 * x2 / 600.0;
    }
    return sine_integral(ax) / ax; // even in x
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

namespace {

// 15-point Kronrod extension of 7-point Gauss (nodes on [-1,1], symmetric).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double a, b, integral, error;
};

void gk15(const std::function<double(double)>& f, double a, double b, Segment& s) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    s.a = a;
    s.b = b;
    s.integral = resk * h;
    s.error = std::abs((resk - resg) * h);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& q) {
    q.validate();
    if (!(a < b)) throw DomainError("integrate: requires a < b");

    auto cmp = [](const Segment& l, const Segment& r) { return l.error < r.error; };
    std::priority_queue<Segment, std::vector<Segment>, decltype(cmp)> heap(cmp);

    Segment s0;
    gk15(f, a, b, s0);
    heap.push(s0);
    double total = s0.integral;
    double err = s0.error;

    int splits = 0;
    while (err > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
        if (splits >= q.max_subdivisions)
            throw ConvergenceError("integrate: subdivision budget exhausted", total, err);
        Segment worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b))
            throw ConvergenceError("integrate: interval underflow", total, err);
        Segment l, r;
        gk15(f, worst.a, mid, l);
        gk15(f, mid, worst.b, r);
        total += l.integral + r.integral - worst.integral;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    return total;
}

double integrate_semi_inf(const std::function<double(double)>& f, double a,
                          double scale, const QuadratureSpec& q) {
    if (!(scale > 0.0)) throw DomainError("integrate_semi_inf: scale must be > 0");
    auto g = [&](double u) {
        double om = 1.0 - u;
        double x = a + scale * u / om;
        return f(x) * scale / (om * om);
    };
    // stop just short of u = 1; the mapped integrand must vanish there
    return integrate(g, 0.0, 1.0 - 1e-14, q);
}

double integrate_real_line(const std::function<double(double)>& f, double scale,
                           const QuadratureSpec& q) {
    auto fneg = [&](double x) { return f(-x); };
    return integrate_semi_inf(f, 0.0, scale, q) + integrate_semi_inf(fneg, 0.0, scale, q);
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes
// ---------------------------------------------------------------------------

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    static std::mutex mtx;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussLegendre gl;
    gl.nodes.resize(static_cast<size_t>(n));
    gl.weights.resize(static_cast<size_t>(n));
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-like initial guess
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[static_cast<size_t>(i)] = -x;
        gl.nodes[static_cast<size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[static_cast<size_t>(i)] = w;
        gl.weights[static_cast<size_t>(n - 1 - i)] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(gl));
    return pos->second;
}

} // namespace qppf::mathkit

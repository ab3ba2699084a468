#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arbscope/analytics.hpp"

namespace arb::analytics {

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete_beta: a,b must be positive");
    if (x < 0.0 || x > 1.0) throw std::domain_error("incomplete_beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The continued fraction converges fast for x < (a+1)/(a+b+2);
    // otherwise use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw std::domain_error("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

Correlation pearson_with_p(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::domain_error("pearson_with_p: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw std::domain_error("pearson_with_p: need at least 3 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw std::domain_error("pearson_with_p: undefined correlation (zero variance)");

    Correlation c;
    c.n = n;
    c.r = sxy / std::sqrt(sxx * syy);
    c.r = std::clamp(c.r, -1.0, 1.0);
    const double df = double(n - 2);
    const double one_minus_r2 = (1.0 - c.r) * (1.0 + c.r);
    if (one_minus_r2 <= 0.0) {
        c.p = 0.0;
        return c;
    }
    const double t = c.r * std::sqrt(df / one_minus_r2);
    c.p = student_t_two_sided_p(t, df);
    return c;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::domain_error("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw std::domain_error("quantile: q must be in [0,1]");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    const double pos = q * double(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - double(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

CdfTable empirical_cdf(std::vector<double> values) {
    CdfTable table;
    if (values.empty()) {
        table.empty = true;
        return table;
    }
    std::sort(values.begin(), values.end());
    const double n = double(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;  // keep last of ties
        table.points.emplace_back(values[i], double(i + 1) / n);
    }
    return table;
}

std::vector<CdfTable> conditional_cdf(std::span<const double> metric,
                                      std::span<const double> condition,
                                      std::span<const double> percentile_thresholds) {
    if (metric.size() != condition.size())
        throw std::domain_error("conditional_cdf: length mismatch");
    std::vector<CdfTable> out;
    std::vector<double> cond(condition.begin(), condition.end());
    for (const double q : percentile_thresholds) {
        if (!(q > 0.0 && q < 1.0))
            throw std::domain_error("conditional_cdf: thresholds must be in (0,1)");
        const double cutoff = quantile(cond, q);
        std::vector<double> selected;
        for (std::size_t i = 0; i < metric.size(); ++i)
            if (condition[i] > cutoff) selected.push_back(metric[i]);
        auto table = empirical_cdf(std::move(selected));
        table.threshold_q = q;
        out.push_back(std::move(table));
    }
    return out;
}

bool first_order_dominates(const CdfTable& a, const CdfTable& b, double tol) {
    if (a.empty || b.empty) return false;
    // F_a(x) <= F_b(x) for every x; evaluate both step functions on the
    // union of their support points.
    auto eval = [](const CdfTable& t, double x) {
        double f = 0.0;
        for (const auto& [xs, fs] : t.points) {
            if (xs <= x)
                f = fs;
            else
                break;
        }
        return f;
    };
    std::vector<double> xs;
    for (const auto& [x, f] : a.points) xs.push_back(x);
    for (const auto& [x, f] : b.points) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (const double x : xs)
        if (eval(a, x) > eval(b, x) + tol) return false;
    return true;
}

}  // namespace arb::analytics

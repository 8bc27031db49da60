#include "pairpot/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace pairpot {

namespace {

constexpr int simpson_intervals = 10000;

/// Composite Simpson over [lo, hi] with a fixed even interval count.
template <typename F>
double simpson(F&& f, double lo, double hi, int intervals = simpson_intervals) {
    const double h = (hi - lo) / intervals;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < intervals; i += 2) odd += f(lo + i * h);
    for (int i = 2; i < intervals; i += 2) even += f(lo + i * h);
    return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

} // namespace

Kernel::Kernel(Kind kind) : kind_(kind) {}

std::optional<Kernel::Kind> Kernel::parse(std::string_view name) {
    if (name == "box") return Kind::box;
    if (name == "epanechnikov") return Kind::epanechnikov;
    if (name == "quartic") return Kind::quartic;
    if (name == "higher_order_4") return Kind::higher_order_4;
    return std::nullopt;
}

const std::vector<Kernel::Kind>& Kernel::catalog() {
    static const std::vector<Kind> kinds = {Kind::box, Kind::epanechnikov, Kind::quartic,
                                            Kind::higher_order_4};
    return kinds;
}

std::string Kernel::name() const {
    switch (kind_) {
        case Kind::box: return "box";
        case Kind::epanechnikov: return "epanechnikov";
        case Kind::quartic: return "quartic";
        case Kind::higher_order_4: return "higher_order_4";
    }
    return "kernel";
}

int Kernel::order() const {
    return kind_ == Kind::higher_order_4 ? 4 : 2;
}

double Kernel::support_lo() const { return kind_ == Kind::box ? -0.5 : -1.0; }
double Kernel::support_hi() const { return kind_ == Kind::box ? 0.5 : 1.0; }

double Kernel::lipschitz_interior() const {
    switch (kind_) {
        case Kind::box: return 0.0;                        // flat between the jumps
        case Kind::epanechnikov: return 1.5;               // |K'| = 1.5 |u|
        case Kind::quartic: return 2.5 / std::sqrt(3.0);   // max of (15/4)|u|(1 - u^2)
        case Kind::higher_order_4: return 3.75;            // |K'(1)| = 15/4
    }
    return 0.0;
}

double Kernel::operator()(double u) const {
    switch (kind_) {
        case Kind::box:
            return (u >= -0.5 && u <= 0.5) ? 1.0 : 0.0;
        case Kind::epanechnikov: {
            if (u < -1.0 || u > 1.0) return 0.0;
            return 0.75 * (1.0 - u * u);
        }
        case Kind::quartic: {
            if (u < -1.0 || u > 1.0) return 0.0;
            const double t = 1.0 - u * u;
            return 0.9375 * t * t;
        }
        case Kind::higher_order_4: {
            // (45/32) (1 - (10/3) u^2 + (7/3) u^4): unit mass, vanishing
            // moments 1..3, negative lobes for |u| > sqrt(3/7).
            if (u < -1.0 || u > 1.0) return 0.0;
            const double u2 = u * u;
            return 1.40625 * (1.0 + u2 * (-10.0 / 3.0 + u2 * (7.0 / 3.0)));
        }
    }
    return 0.0;
}

double Kernel::squared_integral() const {
    return simpson([this](double u) { const double k = (*this)(u); return k * k; },
                   support_lo(), support_hi());
}

MomentReport check_moments(const Kernel& kernel, int alpha, double tol) {
    if (alpha < 1) throw std::invalid_argument("check_moments: alpha must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("check_moments: tol must be positive");
    MomentReport report;
    report.moments.resize(static_cast<std::size_t>(alpha));
    for (int j = 0; j < alpha; ++j) {
        report.moments[static_cast<std::size_t>(j)] =
            simpson([&](double u) { return std::pow(u, j) * kernel(u); },
                    kernel.support_lo(), kernel.support_hi());
    }
    report.passed = std::fabs(report.moments[0] - 1.0) <= tol;
    for (int j = 1; j < alpha; ++j) {
        report.passed = report.passed && std::fabs(report.moments[static_cast<std::size_t>(j)]) <= tol;
    }
    return report;
}

LipschitzReport lipschitz_check(const Kernel& kernel, int probes) {
    if (probes < 1000) throw std::invalid_argument("lipschitz_check: probes must be >= 1000");

    // Probe a padded interval so jumps at the support boundary (the box
    // kernel's) land strictly inside the scan.
    const double pad = 0.1 * (kernel.support_hi() - kernel.support_lo());
    const double lo = kernel.support_lo() - pad;
    const double hi = kernel.support_hi() + pad;
    const auto max_slope = [&](int n) {
        const double h = (hi - lo) / n;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = lo + i * h;
            worst = std::max(worst, std::fabs(kernel(a + h) - kernel(a)) / h);
        }
        return worst;
    };

    const double coarse = max_slope(probes);
    const double fine = max_slope(2 * probes);

    LipschitzReport report;
    // A genuine jump makes the steepest finite difference scale like 1/h.
    report.discontinuous = coarse > 0.0 && fine > 1.5 * coarse;
    if (!report.discontinuous) {
        report.constant = fine;
        return report;
    }
    // Rescan excluding the diverging pairs to recover the interior constant.
    const int n = 2 * probes;
    const double h = (hi - lo) / n;
    double kept = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = lo + i * h;
        const double slope = std::fabs(kernel(a + h) - kernel(a)) / h;
        if (slope < 0.75 * fine) kept = std::max(kept, slope);
    }
    report.constant = kept;
    return report;
}

BandwidthSchedule BandwidthSchedule::constant(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("BandwidthSchedule: constant bandwidth must be positive");
    }
    BandwidthSchedule s;
    s.mode_ = Mode::constant;
    s.value_ = b;
    return s;
}

BandwidthSchedule BandwidthSchedule::power_log(double q1, double q2, double scale) {
    if (!(q2 > 0.0)) throw std::invalid_argument("BandwidthSchedule: q2 must be positive");
    if (q1 < 0.0) throw std::invalid_argument("BandwidthSchedule: q1 must be nonnegative");
    if (!(scale > 0.0)) throw std::invalid_argument("BandwidthSchedule: scale must be positive");
    BandwidthSchedule s;
    s.mode_ = Mode::power_log;
    s.q1_ = q1;
    s.q2_ = q2;
    s.scale_ = scale;
    return s;
}

BandwidthSchedule BandwidthSchedule::reference_rule(int alpha, int dim, double range,
                                                    double smallest_side) {
    if (alpha < 1 || dim < 1 || dim > 3) {
        throw std::invalid_argument("BandwidthSchedule: bad alpha or dim");
    }
    if (!(range > 0.0) || !(smallest_side > 0.0)) {
        throw std::invalid_argument("BandwidthSchedule: range and side must be positive");
    }
    // b(L) = c L^{-1/(2 alpha + dim)}, pinned to b(L0) = range / 4 at the
    // smallest window: bias ~ b^alpha and variance ~ 1/(b L^dim) stay
    // balanced along the ladder.
    const double q2 = 1.0 / (2.0 * alpha + dim);
    const double scale = 0.25 * range * std::pow(smallest_side, q2);
    return power_log(0.0, q2, scale);
}

double BandwidthSchedule::operator()(double side) const {
    if (mode_ == Mode::constant) return value_;
    if (!(side > 1.0)) {
        throw std::invalid_argument("BandwidthSchedule: power-log rule needs side > 1");
    }
    return scale_ * std::pow(side, -q2_) * std::pow(std::log(side), q1_);
}

BandwidthSchedule::Check BandwidthSchedule::check(std::span<const double> sides, int dim,
                                                  double range) const {
    Check result;
    if (sides.empty()) return result;
    result.bandwidth_shrinks = true;
    result.variance_factor_grows = true;
    result.bandwidth_below_range = true;
    double prev_b = 0.0;
    double prev_factor = 0.0;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        const double b = (*this)(sides[i]);
        const double eroded = sides[i] - 4.0 * range;
        const double factor = b * std::pow(std::max(eroded, 0.0), dim);
        if (i > 0) {
            if (!(b < prev_b)) result.bandwidth_shrinks = false;
            if (!(factor > prev_factor)) result.variance_factor_grows = false;
        }
        if (b > range) result.bandwidth_below_range = false;
        prev_b = b;
        prev_factor = factor;
    }
    if (mode_ == Mode::constant && sides.size() > 1) result.bandwidth_shrinks = false;
    return result;
}

} // namespace pairpot

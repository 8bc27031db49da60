#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pairpot {

/// Univariate smoothing kernel catalog. Every kernel integrates to 1,
/// is even, and vanishes outside its support interval.
///
/// `order()` is the first nonvanishing moment index alpha: moments
/// 1..alpha-1 are zero. The fourth-order kernel necessarily takes
/// negative values; a signed kernel is the price of alpha > 2, and the
/// catalog documents that trade instead of pretending a nonnegative
/// alpha = 4 kernel exists.
class Kernel {
public:
    enum class Kind { box, epanechnikov, quartic, higher_order_4 };

    explicit Kernel(Kind kind);

    static std::optional<Kind> parse(std::string_view name);
    static const std::vector<Kind>& catalog();

    Kind kind() const { return kind_; }
    std::string name() const;
    int order() const;              // alpha
    double support_lo() const;
    double support_hi() const;
    bool nonnegative() const { return kind_ != Kind::higher_order_4; }

    /// Interior Lipschitz constant (sup |K'| away from jumps); the box
    /// kernel is flat inside but discontinuous at the edges.
    double lipschitz_interior() const;
    bool discontinuous() const { return kind_ == Kind::box; }

    double operator()(double u) const;

    /// integral of K^2, by composite Simpson quadrature over the support.
    double squared_integral() const;

private:
    Kind kind_;
};

struct MomentReport {
    bool passed = false;
    std::vector<double> moments; // m_0 .. m_{alpha-1}
};

/// Integrates moments 0..alpha-1 with a 10^4-interval composite Simpson
/// rule over the kernel's support; passes iff |m_0 - 1| <= tol and
/// |m_j| <= tol for 1 <= j < alpha.
MomentReport check_moments(const Kernel& kernel, int alpha, double tol);

struct LipschitzReport {
    double constant = 0.0; // finite-difference estimate away from jumps
    bool discontinuous = false;
};

/// Estimates sup |K'| from finite differences at two probe spacings.
/// A maximal slope that keeps doubling under refinement marks a jump;
/// the reported constant then excludes the diverging pairs.
/// Pre: probes >= 1000 (throws std::invalid_argument below that).
LipschitzReport lipschitz_check(const Kernel& kernel, int probes);

/// Bandwidth as a function of the window side L. Either an explicit
/// constant, the power-log family scale * L^(-q2) * (log L)^q1, or the
/// reference rule c * L^(-1/(2 alpha + dim)) with c pinned so that the
/// smallest experiment window gets bandwidth range/4.
class BandwidthSchedule {
public:
    static BandwidthSchedule constant(double b);
    static BandwidthSchedule power_log(double q1, double q2, double scale = 1.0);
    static BandwidthSchedule reference_rule(int alpha, int dim, double range, double smallest_side);

    double operator()(double side) const;
    bool is_constant() const { return mode_ == Mode::constant; }

    struct Check {
        bool bandwidth_shrinks = false;       // b(L_m) < b(L_1)
        bool variance_factor_grows = false;   // b(L) * (L - 4R)^dim increasing
        bool bandwidth_below_range = false;   // b(L) <= R on every rung
    };
    /// Numeric check of the asymptotic requirements over a window ladder.
    Check check(std::span<const double> sides, int dim, double range) const;

private:
    enum class Mode { constant, power_log };
    Mode mode_ = Mode::constant;
    double value_ = 0.1;  // constant mode
    double q1_ = 0.0;
    double q2_ = 0.0;
    double scale_ = 1.0;
};

} // namespace pairpot

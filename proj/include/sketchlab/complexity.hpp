#pragma once

#include "sketchlab/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sketchlab {

class StructuredSet;

/// Upper bound on covering numbers N(r) of a set of diameter D, as a function of the radius r.
///
///  power      N(u D) <= base (c / u)^K for 0 < u <= 1, and N = 1 for r >= D.
///  unit_ball  N(r) <= (1 + D / r)^K for r < D / 2 and N = 1 beyond, the
///             volumetric bound for a ball of radius D / 2 in R^K.
///  empirical  net sizes measured at a grid of radii (a step function);
///             radii below the grid fall back to the cardinality.
class CoveringProfile {
public:
    enum class Kind { power, unit_ball, empirical };

    static CoveringProfile analytic(double dimension, double c, double base = 1.0);
    static CoveringProfile unit_ball(double dimension);
    static CoveringProfile empirical(std::vector<std::pair<double, double>> radius_counts,
                                     std::optional<double> cardinality = std::nullopt);

    Kind kind() const noexcept { return kind_; }
    double dimension() const noexcept { return dimension_; }
    double c() const noexcept { return c_; }
    double base() const noexcept { return base_; }
    const std::vector<std::pair<double, double>>& samples() const noexcept { return samples_; }

    /// log N(radius) for a set of the given diameter; +inf when unbounded.
    double log_covering(double radius, double diameter) const;

private:
    Kind kind_ = Kind::power;
    double dimension_ = 0.0;
    double c_ = 1.0;
    double base_ = 1.0;
    std::vector<std::pair<double, double>> samples_;  // (radius, count), radius ascending
    std::optional<double> cardinality_;
};

/// Entropy integral of sqrt(log N(u)) over (0, diameter], on a 2048-point
/// log-spaced trapezoid grid starting at 1e-6 * diameter.
double dudley_integral(const CoveringProfile& profile, double diameter);

/// Closed-form upper bound u* sqrt(log(e c / u*)) applied to an analytic profile.
double dudley_closed_form_bound(const CoveringProfile& profile, double diameter);

/// min(Dudley integral, diameter * sqrt(log |T|)) when the cardinality is known.
double gamma2_upper(const CoveringProfile& profile, double diameter,
                    std::optional<double> cardinality = std::nullopt);

/// Farthest-point greedy net: every point of `points` lies within `radius` of the net.
PointSet greedy_net(const PointSet& points, const SemiMetric& d, double radius);

/// Empirical profile from greedy nets at each radius.
CoveringProfile empirical_profile(const PointSet& points, const SemiMetric& d,
                                  const std::vector<double>& radii);

struct WidthEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    Index trials = 0;
};

/// Mean over `trials` fresh Gaussian g of max_x |<g, x>| over the fixed sample.
WidthEstimate gaussian_width_mc(const PointSet& points, Index trials, std::uint64_t seed);
/// Draws `sample_count` points once and reuses them for every trial.
WidthEstimate gaussian_width_mc(const StructuredSet& set, Index sample_count, Index trials, std::uint64_t seed);

struct ComplexityEstimate {
    std::string set_id;
    double dudley = 0.0;
    double width = 0.0;
    double width_stderr = 0.0;
    double diameter = 0.0;
};

void write_complexity_header(std::ostream& out);
void write_complexity_row(std::ostream& out, const ComplexityEstimate& e);

}  // namespace sketchlab

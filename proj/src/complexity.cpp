#include "sketchlab/complexity.hpp"

#include "sketchlab/csv.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"
#include "sketchlab/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace sketchlab {

namespace {

constexpr int kDudleyPoints = 2048;
constexpr double kDudleyFloor = 1e-6;

}  // namespace

CoveringProfile CoveringProfile::analytic(double dimension, double c, double base) {
    CoveringProfile p;
    p.kind_ = Kind::power;
    p.dimension_ = dimension;
    p.c_ = c;
    p.base_ = base;
    return p;
}

CoveringProfile CoveringProfile::unit_ball(double dimension) {
    CoveringProfile p;
    p.kind_ = Kind::unit_ball;
    p.dimension_ = dimension;
    p.c_ = 3.0;
    return p;
}

CoveringProfile CoveringProfile::empirical(std::vector<std::pair<double, double>> radius_counts,
                                           std::optional<double> cardinality) {
    if (radius_counts.empty()) throw InvalidArgument("empirical profile needs at least one radius");
    std::sort(radius_counts.begin(), radius_counts.end());
    for (const auto& [r, n] : radius_counts)
        if (!(r > 0.0) || !(n >= 1.0)) throw InvalidArgument("empirical profile needs radii > 0 and counts >= 1");
    CoveringProfile p;
    p.kind_ = Kind::empirical;
    p.samples_ = std::move(radius_counts);
    p.cardinality_ = cardinality;
    return p;
}

double CoveringProfile::log_covering(double radius, double diameter) const {
    if (!(radius > 0.0)) return std::numeric_limits<double>::infinity();
    switch (kind_) {
        case Kind::power: {
            if (radius >= diameter) return 0.0;
            const double u = radius / diameter;
            return std::max(0.0, std::log(base_) + dimension_ * std::log(c_ / u));
        }
        case Kind::unit_ball: {
            if (radius >= 0.5 * diameter) return 0.0;
            return dimension_ * std::log1p(diameter / radius);
        }
        case Kind::empirical: {
            if (radius >= diameter) return 0.0;
            // Largest grid radius not exceeding `radius`: its net also covers at `radius`.
            auto it = std::upper_bound(samples_.begin(), samples_.end(), radius,
                                       [](double r, const auto& s) { return r < s.first; });
            if (it == samples_.begin()) {
                if (!cardinality_) return std::numeric_limits<double>::infinity();
                return std::log(*cardinality_);
            }
            return std::log(std::prev(it)->second);
        }
    }
    return std::numeric_limits<double>::infinity();
}

double dudley_integral(const CoveringProfile& profile, double diameter) {
    if (!(diameter >= 0.0) || !std::isfinite(diameter)) throw InvalidArgument("dudley_integral: bad diameter");
    if (diameter == 0.0) return 0.0;
    // Integrate over v = u / diameter in [floor, 1] with t = log v.
    const double t0 = std::log(kDudleyFloor);
    const double h = -t0 / (kDudleyPoints - 1);
    std::vector<double> terms(kDudleyPoints);
    for (int i = 0; i < kDudleyPoints; ++i) {
        const double t = t0 + h * i;
        const double v = std::exp(t);
        const double logn = profile.log_covering(v * diameter, diameter);
        if (!std::isfinite(logn) || logn < 0.0)
            throw InvalidArgument("dudley_integral: covering profile diverges at radius " + csv::format(v * diameter));
        const double w = (i == 0 || i == kDudleyPoints - 1) ? 0.5 : 1.0;
        terms[static_cast<std::size_t>(i)] = w * std::sqrt(logn) * v;
    }
    return diameter * h * pairwise_sum(terms);
}

double dudley_closed_form_bound(const CoveringProfile& profile, double diameter) {
    switch (profile.kind()) {
        case CoveringProfile::Kind::power:
            // sqrt(log base + K log(c/u)) <= sqrt(log base) + sqrt(K) sqrt(log(c/u))
            return diameter * (std::sqrt(std::max(0.0, std::log(profile.base()))) +
                               std::sqrt(profile.dimension()) * std::sqrt(std::log(std::numbers::e * profile.c())));
        case CoveringProfile::Kind::unit_ball:
            // (1 + 2/u) <= 3/u on the unit ball, integrated up to u* = radius.
            return 0.5 * diameter * std::sqrt(profile.dimension()) * std::sqrt(std::log(3.0 * std::numbers::e));
        case CoveringProfile::Kind::empirical: break;
    }
    throw InvalidArgument("dudley_closed_form_bound: empirical profiles have no closed form");
}

double gamma2_upper(const CoveringProfile& profile, double diameter, std::optional<double> cardinality) {
    double best = dudley_integral(profile, diameter);
    if (cardinality) {
        if (!(*cardinality >= 1.0)) throw InvalidArgument("gamma2_upper: cardinality must be >= 1");
        best = std::min(best, diameter * std::sqrt(std::log(*cardinality)));
    }
    return best;
}

PointSet greedy_net(const PointSet& points, const SemiMetric& d, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("greedy_net: radius must be positive");
    const Index count = points.size();
    std::vector<Vector> net;
    std::vector<double> gap(static_cast<std::size_t>(count), std::numeric_limits<double>::infinity());
    Index next = 0;
    while (true) {
        const Vector centre = points.point(next);
        net.push_back(centre);
        double worst = 0.0;
        Index worst_at = 0;
        for (Index i = 0; i < count; ++i) {
            auto& g = gap[static_cast<std::size_t>(i)];
            g = std::min(g, d(points.point(i), centre));
            if (g > worst) {
                worst = g;
                worst_at = i;
            }
        }
        if (worst <= radius) break;
        next = worst_at;
    }
    return PointSet(net);
}

CoveringProfile empirical_profile(const PointSet& points, const SemiMetric& d, const std::vector<double>& radii) {
    std::vector<std::pair<double, double>> samples;
    samples.reserve(radii.size());
    for (double r : radii) samples.emplace_back(r, static_cast<double>(greedy_net(points, d, r).size()));
    return CoveringProfile::empirical(std::move(samples), static_cast<double>(unique_points(points).size()));
}

WidthEstimate gaussian_width_mc(const PointSet& points, Index trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("gaussian_width_mc: trials must be positive");
    const Matrix& x = points.matrix();
    std::vector<double> sups(static_cast<std::size_t>(trials));
    Vector g(x.rows());
    for (Index t = 0; t < trials; ++t) {
        for (Index k = 0; k < g.size(); ++k) g(k) = normal_at(seed, static_cast<std::uint64_t>(t) + 1, static_cast<std::uint64_t>(k));
        sups[static_cast<std::size_t>(t)] = (x.transpose() * g).cwiseAbs().maxCoeff();
    }
    const double mean = pairwise_sum(sups) / static_cast<double>(trials);
    std::vector<double> dev(sups.size());
    std::transform(sups.begin(), sups.end(), dev.begin(), [mean](double s) { return (s - mean) * (s - mean); });
    const double var = trials > 1 ? pairwise_sum(dev) / static_cast<double>(trials - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(trials)), trials};
}

WidthEstimate gaussian_width_mc(const StructuredSet& set, Index sample_count, Index trials, std::uint64_t seed) {
    return gaussian_width_mc(sample(set, sample_count, mix64(seed)), trials, seed);
}

void write_complexity_header(std::ostream& out) { out << "set_id,dudley,width,stderr,diameter\n"; }

void write_complexity_row(std::ostream& out, const ComplexityEstimate& e) {
    csv::row(out, e.set_id, e.dudley, e.width, e.width_stderr, e.diameter);
}

}  // namespace sketchlab

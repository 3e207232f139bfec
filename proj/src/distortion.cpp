#include "sketchlab/distortion.hpp"

#include "sketchlab/csv.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace sketchlab {

namespace {

constexpr double kWilsonZ = 1.959963984540054;
constexpr Index kRipGuard = 100000;
constexpr double kCurveTolerance = 1e-6;
constexpr Index kCurveMaxPoints = Index{1} << 22;
constexpr double kRoundoff = 1e-12;

void check_dims(const Sketch& sketch, Index n) {
    if (sketch.cols() != n) throw DimensionMismatch("sketch has " + std::to_string(sketch.cols()) +
                                                    " columns but points live in R^" + std::to_string(n));
}

double max_abs_sym_eig(const Matrix& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Visits all pairs (i < j) of columns of `points` at distance >= kDegenerateNorm
// with the images already computed.
template <class Fn>
void for_each_pair(const Sketch& sketch, const PointSet& points, Fn&& fn) {
    check_dims(sketch, points.dim());
    if (points.size() < 2) throw EmptySetError("need at least two points");
    const Matrix images = sketch.matrix() * points.matrix();
    bool any = false;
    for (Index j = 1; j < points.size(); ++j) {
        for (Index i = 0; i < j; ++i) {
            const double d2 = (points.point(i) - points.point(j)).squaredNorm();
            if (std::sqrt(d2) < kDegenerateNorm) continue;
            const double p2 = (images.col(i) - images.col(j)).squaredNorm();
            fn(d2, p2);
            any = true;
        }
    }
    if (!any) throw EmptySetError("all points coincide");
}

}  // namespace

double kappa(const Sketch& sketch, const PointSet& points) {
    check_dims(sketch, points.dim());
    const Matrix images = sketch.matrix() * points.matrix();
    double worst = 0.0;
    for (Index i = 0; i < points.size(); ++i)
        worst = std::max(worst, std::abs(images.col(i).squaredNorm() - points.point(i).squaredNorm()));
    return worst;
}

double delta_exact(const Sketch& sketch, const PointSet& points) {
    check_dims(sketch, points.dim());
    const Matrix images = sketch.matrix() * points.matrix();
    double worst = 0.0;
    bool any = false;
    for (Index i = 0; i < points.size(); ++i) {
        const double x2 = points.point(i).squaredNorm();
        if (std::sqrt(x2) < kDegenerateNorm) continue;
        worst = std::max(worst, std::abs(images.col(i).squaredNorm() / x2 - 1.0));
        any = true;
    }
    if (!any) throw EmptySetError("no nonzero points");
    return worst;
}

double epsilon_mc(const Sketch& sketch, const PointSet& points) {
    double worst = 0.0;
    for_each_pair(sketch, points, [&](double d2, double p2) { worst = std::max(worst, std::abs(p2 / d2 - 1.0)); });
    return worst;
}

double zeta_mc(const Sketch& sketch, const PointSet& points) {
    double worst = 0.0;
    for_each_pair(sketch, points, [&](double d2, double p2) { worst = std::max(worst, std::abs(p2 - d2)); });
    return worst;
}

double epsilon_unsquared(const Sketch& sketch, const PointSet& points) {
    double worst = 0.0;
    for_each_pair(sketch, points,
                  [&](double d2, double p2) { worst = std::max(worst, std::abs(std::sqrt(p2 / d2) - 1.0)); });
    return worst;
}

double kappa_mc(const Sketch& sketch, const StructuredSet& set, Index samples, std::uint64_t seed) {
    if (samples < 1) throw InvalidArgument("kappa_mc needs samples >= 1");
    return kappa(sketch, sample(set, samples, seed));
}

double exact_sparse_rip(const Sketch& sketch, Index s) {
    const Index n = sketch.cols();
    if (s < 1 || s > n) throw InvalidArgument("sparsity must lie in [1, n]");
    if (binomial(n, s) > static_cast<double>(kRipGuard))
        throw InfeasibleError("C(" + std::to_string(n) + ", " + std::to_string(s) + ") exceeds the enumeration guard");
    const Matrix gram = sketch.matrix().transpose() * sketch.matrix();
    std::vector<Index> support(static_cast<std::size_t>(s));
    for (Index i = 0; i < s; ++i) support[static_cast<std::size_t>(i)] = i;
    Matrix block(s, s);
    double worst = 0.0;
    while (true) {
        for (Index a = 0; a < s; ++a)
            for (Index b = 0; b < s; ++b)
                block(a, b) = gram(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
        block.diagonal().array() -= 1.0;
        worst = std::max(worst, max_abs_sym_eig(block));
        Index k = s - 1;
        while (k >= 0 && support[static_cast<std::size_t>(k)] == n - s + k) --k;
        if (k < 0) break;
        ++support[static_cast<std::size_t>(k)];
        for (Index j = k + 1; j < s; ++j)
            support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
    }
    return worst;
}

double exact_subspace_rip(const Sketch& sketch, const std::vector<Subspace>& subspaces) {
    if (subspaces.empty()) throw EmptySetError("no subspaces given");
    double worst = 0.0;
    for (const auto& u : subspaces) {
        check_dims(sketch, u.ambient_dim());
        const Matrix image = sketch.matrix() * u.basis();
        Matrix g = image.transpose() * image;
        g.diagonal().array() -= 1.0;
        worst = std::max(worst, max_abs_sym_eig(g));
    }
    return worst;
}

double eps_no_squares(double eps_hat) {
    if (!(eps_hat > 0.0 && eps_hat < 1.0)) throw InvalidArgument("eps_hat must lie in (0, 1)");
    return 2.0 * eps_hat - eps_hat * eps_hat;
}

double curve_length_distortion(const Sketch& sketch, const ManifoldSpec& spec, std::span<const double> grid) {
    spec.validate();
    if (!spec.is_curve()) throw InvalidArgument("curve_length_distortion needs a curve");
    check_dims(sketch, spec.ambient);
    if (grid.size() < 2) throw InvalidArgument("degenerate grid: fewer than two parameters");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("degenerate grid: parameters must increase strictly");

    std::vector<double> params(grid.begin(), grid.end());
    auto ratio_at = [&](const std::vector<double>& t) {
        const PointSet curve = manifold_curve(spec, t);
        const double length = polyline_length(curve);
        if (!(length > kDegenerateNorm)) throw InvalidArgument("degenerate grid: zero-length polyline");
        return polyline_length(PointSet(Matrix(sketch.matrix() * curve.matrix()))) / length;
    };
    double ratio = ratio_at(params);
    while (static_cast<Index>(params.size()) < kCurveMaxPoints) {
        std::vector<double> finer;
        finer.reserve(2 * params.size() - 1);
        for (std::size_t i = 0; i + 1 < params.size(); ++i) {
            finer.push_back(params[i]);
            finer.push_back(0.5 * (params[i] + params[i + 1]));
        }
        finer.push_back(params.back());
        const double next = ratio_at(finer);
        const bool done = std::abs(next - ratio) <= kCurveTolerance * std::abs(next);
        ratio = next;
        params = std::move(finer);
        if (done) break;
    }
    return std::abs(ratio - 1.0);
}

WilsonInterval wilson_interval(Index failures, Index trials) {
    if (trials < 1 || failures < 0 || failures > trials) throw InvalidArgument("invalid failure count");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(failures) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kWilsonZ / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

FailureRate failure_rate(const std::function<double(std::uint64_t)>& measure, double target, Index trials,
                         std::uint64_t seed, Index jobs) {
    if (trials < 10) throw InvalidArgument("failure_rate needs at least 10 trials");
    FailureRate out;
    out.trials = trials;
    out.measurements = parallel_map(static_cast<std::size_t>(trials), static_cast<std::size_t>(std::max<Index>(jobs, 1)),
                                    [&](std::size_t i) { return measure(seed + i); });
    for (double v : out.measurements)
        if (v > target) ++out.failures;
    out.rate = static_cast<double>(out.failures) / static_cast<double>(trials);
    out.interval = wilson_interval(out.failures, trials);
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptySetError("median of nothing");
    std::sort(values.begin(), values.end());
    const std::size_t h = values.size() / 2;
    return values.size() % 2 == 1 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

DistortionReport measure_finite(const Sketch& sketch, const PointSet& points) {
    DistortionReport r;
    r.family = family_name(sketch.spec().family, sketch.spec().q);
    r.m = sketch.rows();
    r.n = sketch.cols();
    r.mode = ReportMode::exact;
    r.samples = points.size();
    r.seed = sketch.spec().seed;
    r.kappa = kappa(sketch, points);
    r.delta = delta_exact(sketch, points);
    if (unique_points(points).size() >= 2) {
        r.epsilon = epsilon_mc(sketch, points);
        r.zeta = zeta_mc(sketch, points);
    }
    return r;
}

DistortionReport measure_set(const Sketch& sketch, const StructuredSet& set, Index samples, std::uint64_t seed) {
    check_dims(sketch, set.ambient_dim());
    if (const auto* f = std::get_if<FiniteSet>(&set.value())) {
        DistortionReport r = measure_finite(sketch, f->points);
        r.set_id = set.kind();
        return r;
    }
    DistortionReport r;
    r.set_id = set.kind();
    r.family = family_name(sketch.spec().family, sketch.spec().q);
    r.m = sketch.rows();
    r.n = sketch.cols();
    r.seed = seed;

    if (const auto* u = std::get_if<UnionSet>(&set.value())) {
        r.mode = ReportMode::exact;
        r.samples = static_cast<Index>(u->subspaces.size());
        r.delta = exact_subspace_rip(sketch, u->subspaces);
        std::vector<Subspace> differences;
        for (std::size_t i = 0; i < u->subspaces.size(); ++i)
            for (std::size_t j = i; j < u->subspaces.size(); ++j)
                differences.push_back(joint_subspace(u->subspaces[i], u->subspaces[j]));
        r.epsilon = exact_subspace_rip(sketch, differences);
        return r;
    }
    if (const auto* sp = std::get_if<SparseSet>(&set.value());
        sp && binomial(sp->n, std::min(2 * sp->s, sp->n)) <= static_cast<double>(kRipGuard)) {
        r.mode = ReportMode::exact;
        r.samples = static_cast<Index>(binomial(sp->n, sp->s));
        r.delta = exact_sparse_rip(sketch, sp->s);
        r.epsilon = exact_sparse_rip(sketch, std::min(2 * sp->s, sp->n));
        return r;
    }

    if (samples < 2) throw InvalidArgument("Monte Carlo measurement needs at least two samples");
    r.mode = ReportMode::monte_carlo;
    r.samples = samples;
    const PointSet points = sample(set, samples, seed);
    r.delta = delta_exact(sketch, points);
    r.epsilon = epsilon_mc(sketch, points);
    if (!set.is_cone()) {
        r.kappa = kappa(sketch, points);
        r.zeta = zeta_mc(sketch, points);
    }
    return r;
}

void write_report_header(std::ostream& out) {
    csv::row(out, "set_id", "family", "m", "n", "mode", "samples", "kappa", "delta", "epsilon", "zeta", "seed");
}

void write_report_row(std::ostream& out, const DistortionReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? csv::format(*v) : std::string(); };
    csv::row(out, r.set_id, r.family, r.m, r.n, r.mode == ReportMode::exact ? "exact" : "monte_carlo", r.samples,
             opt(r.kappa), opt(r.delta), opt(r.epsilon), opt(r.zeta), std::to_string(r.seed));
}

Vector chord_map(const Vector& x, const Vector& y) {
    const Vector d = y - x;
    const double norm = d.norm();
    if (norm < kDegenerateNorm) throw InvalidArgument("chord between coincident points");
    return d / norm;
}

LongChordReport check_long_chords(Index quadruples, Index n, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    LongChordReport rep;
    Rng rng(seed, 17);
    Vector x1(n), x2(n), y1(n), y2(n);
    auto fill = [&](Vector& v) {
        for (Index i = 0; i < n; ++i) v(i) = rng.normal();
    };
    for (Index q = 0; q < quadruples; ++q) {
        fill(x1);
        fill(x2);
        const double gap = (x1 - x2).norm();
        const double t = gap * rng.uniform();
        // perturbation scales spread over many orders of magnitude
        const double s1 = std::pow(10.0, -8.0 + 9.0 * rng.uniform());
        const double s2 = std::pow(10.0, -8.0 + 9.0 * rng.uniform());
        fill(y1);
        fill(y2);
        y1 = x1 + s1 * y1;
        y2 = x2 + s2 * y2;
        if (gap < kDegenerateNorm || (y1 - y2).norm() < kDegenerateNorm || !(t > 0.0)) continue;
        const double lhs = (chord_map(x1, x2) - chord_map(y1, y2)).norm();
        const double rhs = 2.0 / t * ((x1 - y1).norm() + (x2 - y2).norm());
        ++rep.checked;
        rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
        if (lhs > rhs * (1.0 + kRoundoff)) ++rep.violations;
    }
    return rep;
}

namespace {

// A pair of manifold points, half of them drawn close together.
std::pair<ManifoldPoint, ManifoldPoint> manifold_pair(const ManifoldSpec& spec, Rng& rng) {
    const bool near = rng.uniform() < 0.5;
    const double offset = std::pow(10.0, -6.0 + 6.0 * rng.uniform()) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    if (spec.is_curve()) {
        const double t1 = spec.t_max * rng.uniform();
        double t2 = near ? t1 + offset : spec.t_max * rng.uniform();
        if (spec.shape == ManifoldShape::helix) t2 = std::clamp(t2, 0.0, spec.t_max);
        return {curve_point(spec, t1), curve_point(spec, t2)};
    }
    const double t1 = 2.0 * std::numbers::pi * rng.uniform();
    const double s1 = std::acos(1.0 - 2.0 * rng.uniform());
    if (near) {
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        const double s2 = std::clamp(s1 + offset * std::cos(angle), 1e-9, std::numbers::pi - 1e-9);
        return {sphere_point(spec, t1, std::clamp(s1, 1e-9, std::numbers::pi - 1e-9)),
                sphere_point(spec, t1 + offset * std::sin(angle), s2)};
    }
    const double t2 = 2.0 * std::numbers::pi * rng.uniform();
    const double s2 = std::acos(1.0 - 2.0 * rng.uniform());
    return {sphere_point(spec, t1, std::clamp(s1, 1e-9, std::numbers::pi - 1e-9)),
            sphere_point(spec, t2, std::clamp(s2, 1e-9, std::numbers::pi - 1e-9))};
}

double chord_tangent_deviation(const ManifoldPoint& p1, const ManifoldPoint& p2) {
    const Vector ch = chord_map(p1.x, p2.x);
    return (ch - p1.tangent * (p1.tangent.transpose() * ch)).norm();
}

}  // namespace

ShortChordReport check_short_chords(const ManifoldSpec& spec, double reach, Index pairs, std::uint64_t seed) {
    spec.validate();
    if (!(reach > 0.0)) throw InvalidArgument("reach must be positive");
    ShortChordReport rep;
    Rng rng(seed, 23);
    const double iota_bound = 2.0 / reach;
    const double fin_const = 2.0 * std::numbers::sqrt2 / std::sqrt(reach);
    for (Index k = 0; k < pairs; ++k) {
        const auto [p1, p2] = manifold_pair(spec, rng);
        const double gap = (p1.x - p2.x).norm();
        if (gap < kDegenerateNorm) continue;
        ++rep.checked;
        const double iota_ratio = chord_tangent_deviation(p1, p2) / gap;
        rep.iota_lower_bound = std::max(rep.iota_lower_bound, iota_ratio);
        rep.worst_iota_ratio = std::max(rep.worst_iota_ratio, iota_ratio / iota_bound);
        if (iota_ratio > iota_bound * (1.0 + kRoundoff)) ++rep.iota_violations;
        const double fin = finsler_distance(Subspace(p1.tangent), Subspace(p2.tangent));
        const double fin_bound = fin_const * std::sqrt(gap);
        rep.worst_finsler_ratio = std::max(rep.worst_finsler_ratio, fin / fin_bound);
        if (fin > fin_bound * (1.0 + kRoundoff)) ++rep.finsler_violations;
    }
    return rep;
}

double iota_lower_bound(const ManifoldSpec& spec, Index pairs, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed, 29);
    double best = 0.0;
    for (Index k = 0; k < pairs; ++k) {
        const auto [p1, p2] = manifold_pair(spec, rng);
        const double gap = (p1.x - p2.x).norm();
        if (gap < kDegenerateNorm) continue;
        best = std::max(best, chord_tangent_deviation(p1, p2) / gap);
    }
    return best;
}

}  // namespace sketchlab

#include "sketchlab/core.hpp"

#include "sketchlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace sketchlab {

namespace {

void require_finite(const Matrix& m) {
    if (!m.allFinite()) throw InvalidArgument("point set contains NaN or Inf entries");
}

}  // namespace

PointSet::PointSet(Matrix columns) : points_(std::move(columns)) {
    if (points_.cols() == 0) throw EmptySetError("point set is empty");
    if (points_.rows() == 0) throw InvalidArgument("points must have positive dimension");
    require_finite(points_);
}

PointSet::PointSet(const std::vector<Vector>& points) {
    if (points.empty()) throw EmptySetError("point set is empty");
    const Index n = points.front().size();
    if (n == 0) throw InvalidArgument("points must have positive dimension");
    points_.resize(n, static_cast<Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != n) throw DimensionMismatch("points have unequal dimensions");
        points_.col(static_cast<Index>(i)) = points[i];
    }
    require_finite(points_);
}

double euclidean_distance(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("euclidean_distance: dimension mismatch");
    return (x - y).norm();
}

SemiMetric euclidean_metric() {
    return [](const Vector& x, const Vector& y) { return euclidean_distance(x, y); };
}

double diameter(const PointSet& points, const SemiMetric& d) {
    double best = 0.0;
    for (Index i = 0; i < points.size(); ++i) {
        const Vector xi = points.point(i);
        for (Index j = i + 1; j < points.size(); ++j) best = std::max(best, d(xi, points.point(j)));
    }
    return best;
}

double euclidean_diameter(const PointSet& points) {
    const Matrix& x = points.matrix();
    const Vector sq = x.colwise().squaredNorm().transpose();
    const Matrix gram = x.transpose() * x;
    double best = 0.0;
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < j; ++i) best = std::max(best, sq(i) + sq(j) - 2.0 * gram(i, j));
    return std::sqrt(std::max(best, 0.0));
}

PointSet unique_points(const PointSet& points) {
    std::vector<Vector> kept;
    for (Index i = 0; i < points.size(); ++i) {
        const Vector x = points.point(i);
        const bool seen = std::any_of(kept.begin(), kept.end(), [&](const Vector& y) {
            return (x - y).norm() < kDegenerateNorm;
        });
        if (!seen) kept.push_back(x);
    }
    return PointSet(kept);
}

namespace {

std::vector<Vector> chord_list(const PointSet& points, bool normalize) {
    if (points.size() < 2) throw EmptySetError("chords need at least two points");
    const PointSet distinct = unique_points(points);
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(distinct.size() * (distinct.size() - 1)));
    for (Index i = 0; i < distinct.size(); ++i) {
        for (Index j = 0; j < distinct.size(); ++j) {
            if (i == j) continue;
            Vector c = distinct.point(i) - distinct.point(j);
            if (normalize) c /= c.norm();
            out.push_back(std::move(c));
        }
    }
    if (out.empty()) throw EmptySetError("all points coincide; no chords");
    return out;
}

}  // namespace

PointSet chords(const PointSet& points) { return PointSet(chord_list(points, false)); }

PointSet normalized_chords(const PointSet& points) { return PointSet(chord_list(points, true)); }

PointSet normalized_vectors(const PointSet& points) {
    std::vector<Vector> out;
    for (Index i = 0; i < points.size(); ++i) {
        const double r = points.point(i).norm();
        if (r < kDegenerateNorm) continue;
        out.emplace_back(points.point(i) / r);
    }
    if (out.empty()) throw EmptySetError("every vector is zero; nothing to normalize");
    return PointSet(out);
}

double psi2_norm_estimate(std::span<const double> samples) {
    if (samples.empty()) throw EmptySetError("psi2_norm_estimate: no samples");
    double peak = 0.0;
    for (double x : samples) {
        if (!std::isfinite(x)) throw InvalidArgument("psi2_norm_estimate: non-finite sample");
        peak = std::max(peak, std::abs(x));
    }
    if (peak == 0.0) return 0.0;

    // Work on samples scaled by the peak so the search is scale-free.
    std::vector<double> squared(samples.size());
    std::transform(samples.begin(), samples.end(), squared.begin(), [peak](double x) {
        const double y = x / peak;
        return y * y;
    });
    const auto excess = [&](double c) {
        const double inv = 1.0 / (c * c);
        double sum = 0.0;
        for (double y2 : squared) sum += std::exp(y2 * inv);
        return sum / static_cast<double>(squared.size()) - 2.0;
    };

    double lo = 1e-12;
    double hi = 10.0;
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi * peak;
}

}  // namespace sketchlab

#include "sketchlab/parallel.hpp"

namespace sketchlab {

double pairwise_sum(const double* first, std::size_t count) {
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += first[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(first, half) + pairwise_sum(first + half, count - half);
}

}  // namespace sketchlab

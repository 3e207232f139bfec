#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sketchlab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Chords and vectors shorter than this are treated as degenerate and skipped.
inline constexpr double kDegenerateNorm = 1e-12;

/// Nonempty finite set of points in R^n, stored column-wise.
class PointSet {
public:
    /// Takes ownership of an n x count matrix whose columns are the points.
    explicit PointSet(Matrix columns);
    explicit PointSet(const std::vector<Vector>& points);

    Index size() const noexcept { return points_.cols(); }
    Index dim() const noexcept { return points_.rows(); }
    auto point(Index i) const { return points_.col(i); }
    const Matrix& matrix() const noexcept { return points_; }

private:
    Matrix points_;
};

/// Symmetric, nonnegative distance satisfying the triangle inequality.
using SemiMetric = std::function<double(const Vector&, const Vector&)>;

double euclidean_distance(const Vector& x, const Vector& y);
SemiMetric euclidean_metric();

/// Largest pairwise distance under `d`; 0 for a singleton.
double diameter(const PointSet& points, const SemiMetric& d);
double euclidean_diameter(const PointSet& points);

/// Drops points closer than kDegenerateNorm to an earlier point.
PointSet unique_points(const PointSet& points);

/// All differences x - y over ordered pairs of distinct points.
PointSet chords(const PointSet& points);

/// Differences of distinct points scaled to unit length.
PointSet normalized_chords(const PointSet& points);

/// Nonzero points scaled to unit length.
PointSet normalized_vectors(const PointSet& points);

/// Empirical subgaussian norm: the smallest C with mean(exp(x^2 / C^2)) <= 2,
/// found by bisection. Returns 0 when every sample is zero.
double psi2_norm_estimate(std::span<const double> samples);

}  // namespace sketchlab

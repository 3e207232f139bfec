#pragma once

#include "sketchlab/core.hpp"
#include "sketchlab/subspaces.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sketchlab {

enum class ManifoldShape { circle, sphere2, helix };

/// Smooth submanifold of R^n embedded in the leading coordinates:
///   circle  t -> R (cos t, sin t)                   reach R, dim 1
///   sphere2 (t, s) -> R (sin s cos t, sin s sin t, cos s)  reach R, dim 2
///   helix   t -> (a cos t, a sin t, b t), t in [0, t_max]   dim 1
struct ManifoldSpec {
    ManifoldShape shape = ManifoldShape::circle;
    Index ambient = 2;
    double radius = 1.0;
    double a = 1.0;
    double b = 1.0;
    double t_max = 6.283185307179586;

    static ManifoldSpec circle(double radius, Index ambient);
    static ManifoldSpec sphere2(double radius, Index ambient);
    static ManifoldSpec helix(double a, double b, Index ambient);

    Index intrinsic_dim() const noexcept { return shape == ManifoldShape::sphere2 ? 2 : 1; }
    /// Known reach; the helix has none recorded.
    std::optional<double> known_reach() const;
    bool is_curve() const noexcept { return shape != ManifoldShape::sphere2; }
    void validate() const;
};

/// A point of a manifold with an orthonormal basis of its tangent space.
struct ManifoldPoint {
    Vector x;
    Matrix tangent;
};

/// Curve point at parameter t (circle, helix).
ManifoldPoint curve_point(const ManifoldSpec& spec, double t);
/// Sphere point at azimuth t and polar angle s.
ManifoldPoint sphere_point(const ManifoldSpec& spec, double t, double s);
/// Points drawn uniformly in the parameter domain (uniform area on the sphere).
std::vector<ManifoldPoint> sample_manifold(const ManifoldSpec& spec, Index count, std::uint64_t seed);

struct FiniteSet {
    PointSet points;
};
struct SparseSet {
    Index n;
    Index s;
};
/// l-cosparse vectors with respect to an analysis operator (p x n).
struct CosparseSet {
    Matrix analysis;
    Index l;
};
/// n1 x n2 matrices of rank <= r, flattened row-major.
struct LowRankSet {
    Index n1;
    Index n2;
    Index r;
};
/// Tensors of multilinear rank <= ranks, flattened row-major.
struct TuckerSet {
    std::vector<Index> dims;
    std::vector<Index> ranks;
};
/// Finite union of subspaces.
struct UnionSet {
    std::vector<Subspace> subspaces;
};
struct ManifoldSet {
    ManifoldSpec spec;
};

/// Tagged description of a structured data set in R^n.
class StructuredSet {
public:
    using Variant = std::variant<FiniteSet, SparseSet, CosparseSet, LowRankSet, TuckerSet, UnionSet, ManifoldSet>;

    static StructuredSet finite(PointSet points);
    static StructuredSet sparse(Index n, Index s);
    static StructuredSet cosparse(Matrix analysis, Index l);
    static StructuredSet lowrank(Index n1, Index n2, Index r);
    static StructuredSet tucker(std::vector<Index> dims, std::vector<Index> ranks);
    static StructuredSet union_of(std::vector<Subspace> subspaces);
    static StructuredSet manifold(ManifoldSpec spec);

    const Variant& value() const noexcept { return value_; }
    std::string kind() const;
    Index ambient_dim() const;
    /// Closed under positive scaling (a union of subspaces or similar cone);
    /// samples of cones are normalized by default.
    bool is_cone() const noexcept;

private:
    explicit StructuredSet(Variant v) : value_(std::move(v)) {}
    Variant value_;
};

enum class Normalization { automatic, unit, raw };

/// `count` points of the set. automatic normalizes cones and keeps finite sets
/// and manifolds as they are. Finite sets yield their points cyclically.
PointSet sample(const StructuredSet& set, Index count, std::uint64_t seed,
                Normalization norm = Normalization::automatic);

/// Exact membership test at tolerance `tol` (relative to the norm of x where it matters).
bool contains(const StructuredSet& set, const Vector& x, double tol = 1e-10);

/// All s-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<Index>> enumerate_supports(Index n, Index s);
/// Exact binomial coefficient as a double (exact up to 2^53).
double binomial(Index n, Index k);

/// (n-1) x n matrix with rows e_{i+1} - e_i.
Matrix finite_difference_operator(Index n);

/// Curve points at the parameters of a strictly increasing grid.
PointSet manifold_curve(const ManifoldSpec& spec, std::span<const double> grid);
/// Length of the polyline through the points in order.
double polyline_length(const PointSet& points);

/// `count` i.i.d. standard Gaussian points in R^n.
PointSet gaussian_cloud(Index count, Index n, std::uint64_t seed);

/// Numerical rank: number of singular values above tol * max(1, largest).
Index numerical_rank(const Matrix& a, double tol);
/// Mode-k unfolding of a row-major tensor given as a flat vector.
Matrix unfold(const Vector& flat, const std::vector<Index>& dims, std::size_t mode);

/// Header row x0..x{n-1}, then one point per row.
void write_pointset_csv(std::ostream& out, const PointSet& points);
/// Accepts files with or without the header row.
PointSet read_pointset_csv(std::istream& in);

}  // namespace sketchlab

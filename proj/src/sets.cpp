#include "sketchlab/sets.hpp"

#include "sketchlab/csv.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>

namespace sketchlab {

// ---------------------------------------------------------------- manifolds

ManifoldSpec ManifoldSpec::circle(double radius, Index ambient) {
    ManifoldSpec s;
    s.shape = ManifoldShape::circle;
    s.radius = radius;
    s.ambient = ambient;
    s.validate();
    return s;
}

ManifoldSpec ManifoldSpec::sphere2(double radius, Index ambient) {
    ManifoldSpec s;
    s.shape = ManifoldShape::sphere2;
    s.radius = radius;
    s.ambient = ambient;
    s.validate();
    return s;
}

ManifoldSpec ManifoldSpec::helix(double a, double b, Index ambient) {
    ManifoldSpec s;
    s.shape = ManifoldShape::helix;
    s.a = a;
    s.b = b;
    s.ambient = ambient;
    s.validate();
    return s;
}

std::optional<double> ManifoldSpec::known_reach() const {
    if (shape == ManifoldShape::helix) return std::nullopt;
    return radius;
}

void ManifoldSpec::validate() const {
    const Index needed = shape == ManifoldShape::circle ? 2 : 3;
    if (ambient < needed) throw InvalidArgument("ambient dimension too small for the manifold");
    if (shape == ManifoldShape::helix) {
        if (!(a > 0.0 && b > 0.0 && t_max > 0.0)) throw InvalidArgument("helix needs a, b, t_max > 0");
    } else if (!(radius > 0.0)) {
        throw InvalidArgument("manifold radius must be positive");
    }
}

ManifoldPoint curve_point(const ManifoldSpec& spec, double t) {
    ManifoldPoint p{Vector::Zero(spec.ambient), Matrix::Zero(spec.ambient, 1)};
    switch (spec.shape) {
        case ManifoldShape::circle:
            p.x(0) = spec.radius * std::cos(t);
            p.x(1) = spec.radius * std::sin(t);
            p.tangent(0, 0) = -std::sin(t);
            p.tangent(1, 0) = std::cos(t);
            break;
        case ManifoldShape::helix: {
            const double speed = std::hypot(spec.a, spec.b);
            p.x(0) = spec.a * std::cos(t);
            p.x(1) = spec.a * std::sin(t);
            p.x(2) = spec.b * t;
            p.tangent(0, 0) = -spec.a * std::sin(t) / speed;
            p.tangent(1, 0) = spec.a * std::cos(t) / speed;
            p.tangent(2, 0) = spec.b / speed;
            break;
        }
        case ManifoldShape::sphere2: throw InvalidArgument("curve_point: the sphere is not a curve");
    }
    return p;
}

ManifoldPoint sphere_point(const ManifoldSpec& spec, double t, double s) {
    if (spec.shape != ManifoldShape::sphere2) throw InvalidArgument("sphere_point: manifold is not a sphere");
    ManifoldPoint p{Vector::Zero(spec.ambient), Matrix::Zero(spec.ambient, 2)};
    const Eigen::Vector3d normal(std::sin(s) * std::cos(t), std::sin(s) * std::sin(t), std::cos(s));
    p.x.head<3>() = spec.radius * normal;
    // Orthonormal complement of the normal; robust at the poles.
    Eigen::Vector3d helper = std::abs(normal.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e1 = normal.cross(helper).normalized();
    const Eigen::Vector3d e2 = normal.cross(e1);
    p.tangent.block<3, 1>(0, 0) = e1;
    p.tangent.block<3, 1>(0, 1) = e2;
    return p;
}

std::vector<ManifoldPoint> sample_manifold(const ManifoldSpec& spec, Index count, std::uint64_t seed) {
    spec.validate();
    if (count < 1) throw InvalidArgument("sample_manifold: count must be positive");
    Rng rng(seed, 0x6d616e69);
    std::vector<ManifoldPoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        switch (spec.shape) {
            case ManifoldShape::circle:
                out.push_back(curve_point(spec, 2.0 * std::numbers::pi * rng.uniform()));
                break;
            case ManifoldShape::helix: out.push_back(curve_point(spec, spec.t_max * rng.uniform())); break;
            case ManifoldShape::sphere2: {
                const double t = 2.0 * std::numbers::pi * rng.uniform();
                const double s = std::acos(1.0 - 2.0 * rng.uniform());
                out.push_back(sphere_point(spec, t, s));
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------- structured sets

StructuredSet StructuredSet::finite(PointSet points) { return StructuredSet(FiniteSet{std::move(points)}); }

StructuredSet StructuredSet::sparse(Index n, Index s) {
    if (n < 1 || s < 1 || s > n) throw InvalidArgument("sparse set needs 1 <= s <= n");
    return StructuredSet(SparseSet{n, s});
}

StructuredSet StructuredSet::cosparse(Matrix analysis, Index l) {
    if (analysis.rows() < 1 || analysis.cols() < 1) throw InvalidArgument("cosparse set needs a nonempty analysis operator");
    if (l < 0 || l > analysis.rows()) throw InvalidArgument("cosparse set needs 0 <= l <= p");
    return StructuredSet(CosparseSet{std::move(analysis), l});
}

StructuredSet StructuredSet::lowrank(Index n1, Index n2, Index r) {
    if (n1 < 1 || n2 < 1 || r < 1 || r > std::min(n1, n2)) throw InvalidArgument("low-rank set needs 1 <= r <= min(n1, n2)");
    return StructuredSet(LowRankSet{n1, n2, r});
}

StructuredSet StructuredSet::tucker(std::vector<Index> dims, std::vector<Index> ranks) {
    if (dims.size() < 2 || dims.size() != ranks.size()) throw InvalidArgument("tucker set needs d >= 2 matching dims and ranks");
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (ranks[i] < 1 || ranks[i] > dims[i]) throw InvalidArgument("tucker set needs 1 <= r_i <= n_i");
    return StructuredSet(TuckerSet{std::move(dims), std::move(ranks)});
}

StructuredSet StructuredSet::union_of(std::vector<Subspace> subspaces) {
    if (subspaces.empty()) throw EmptySetError("union of subspaces needs at least one subspace");
    for (const auto& s : subspaces)
        if (s.ambient_dim() != subspaces.front().ambient_dim()) throw DimensionMismatch("subspaces live in different spaces");
    return StructuredSet(UnionSet{std::move(subspaces)});
}

StructuredSet StructuredSet::manifold(ManifoldSpec spec) {
    spec.validate();
    return StructuredSet(ManifoldSet{spec});
}

std::string StructuredSet::kind() const {
    static constexpr const char* names[] = {"finite", "sparse", "cosparse", "lowrank", "tucker", "uos", "manifold"};
    return names[value_.index()];
}

namespace {

Index product(const std::vector<Index>& v) {
    return std::accumulate(v.begin(), v.end(), Index{1}, std::multiplies<Index>());
}

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

Index StructuredSet::ambient_dim() const {
    return std::visit(Overloaded{
                          [](const FiniteSet& f) { return f.points.dim(); },
                          [](const SparseSet& s) { return s.n; },
                          [](const CosparseSet& c) { return c.analysis.cols(); },
                          [](const LowRankSet& l) { return l.n1 * l.n2; },
                          [](const TuckerSet& t) { return product(t.dims); },
                          [](const UnionSet& u) { return u.subspaces.front().ambient_dim(); },
                          [](const ManifoldSet& m) { return m.spec.ambient; },
                      },
                      value_);
}

bool StructuredSet::is_cone() const noexcept {
    return !std::holds_alternative<FiniteSet>(value_) && !std::holds_alternative<ManifoldSet>(value_);
}

// ------------------------------------------------------------- combinatorics

double binomial(Index n, Index k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
}

std::vector<std::vector<Index>> enumerate_supports(Index n, Index s) {
    if (s < 1 || s > n) throw InvalidArgument("enumerate_supports needs 1 <= s <= n");
    if (n > 25 || binomial(n, s) > 1e6)
        throw InfeasibleError("enumerate_supports: C(" + std::to_string(n) + "," + std::to_string(s) +
                              ") exceeds the enumeration guard (n <= 25, count <= 1e6)");
    std::vector<std::vector<Index>> out;
    out.reserve(static_cast<std::size_t>(binomial(n, s)));
    std::vector<Index> idx(static_cast<std::size_t>(s));
    std::iota(idx.begin(), idx.end(), Index{0});
    while (true) {
        out.push_back(idx);
        Index i = s - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - s + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (Index j = i + 1; j < s; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

Matrix finite_difference_operator(Index n) {
    if (n < 2) throw InvalidArgument("finite_difference_operator needs n >= 2");
    Matrix d = Matrix::Zero(n - 1, n);
    for (Index i = 0; i + 1 < n; ++i) {
        d(i, i) = -1.0;
        d(i, i + 1) = 1.0;
    }
    return d;
}

// ------------------------------------------------------------- linear tools

Index numerical_rank(const Matrix& a, double tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const Vector& sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, sv(0));
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

Matrix unfold(const Vector& flat, const std::vector<Index>& dims, std::size_t mode) {
    if (mode >= dims.size() || product(dims) != flat.size()) throw DimensionMismatch("unfold: bad tensor shape");
    const Index rows = dims[mode];
    const Index cols = flat.size() / rows;
    Matrix out(rows, cols);
    std::vector<Index> idx(dims.size(), 0);
    for (Index lin = 0; lin < flat.size(); ++lin) {
        // column index: remaining indices in row-major order
        Index col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (k == mode) continue;
            col = col * dims[k] + idx[k];
        }
        out(idx[mode], col) = flat(lin);
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
    return out;
}

namespace {

Vector fold(const Matrix& unfolded, const std::vector<Index>& dims, std::size_t mode) {
    Vector flat(product(dims));
    std::vector<Index> idx(dims.size(), 0);
    for (Index lin = 0; lin < flat.size(); ++lin) {
        Index col = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (k == mode) continue;
            col = col * dims[k] + idx[k];
        }
        flat(lin) = unfolded(idx[mode], col);
        for (std::size_t k = dims.size(); k-- > 0;) {
            if (++idx[k] < dims[k]) break;
            idx[k] = 0;
        }
    }
    return flat;
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
    return g;
}

std::vector<Index> random_subset(Index n, Index k, Rng& rng) {
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < k; ++i) {
        const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Orthonormal basis of the null space of the rows of `analysis` in `rows`.
Matrix cosparse_null_space(const Matrix& analysis, const std::vector<Index>& rows) {
    const Index n = analysis.cols();
    if (rows.empty()) return Matrix::Identity(n, n);
    Matrix sub(static_cast<Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) sub.row(static_cast<Index>(i)) = analysis.row(rows[i]);
    Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

Vector sample_tucker(const TuckerSet& t, Rng& rng) {
    std::vector<Index> shape = t.ranks;
    Vector flat(product(shape));
    for (Index i = 0; i < flat.size(); ++i) flat(i) = rng.normal();
    for (std::size_t mode = 0; mode < t.dims.size(); ++mode) {
        const Matrix g = gaussian_matrix(t.dims[mode], t.ranks[mode], rng);
        const Matrix factor = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(t.dims[mode], t.ranks[mode]);
        const Matrix unfolded = unfold(flat, shape, mode);
        shape[mode] = t.dims[mode];
        flat = fold(factor * unfolded, shape, mode);
    }
    return flat;
}

Vector sample_one(const StructuredSet::Variant& v, Index i, Rng& rng) {
    return std::visit(
        Overloaded{
            [&](const FiniteSet& f) -> Vector { return f.points.point(i % f.points.size()); },
            [&](const SparseSet& s) -> Vector {
                Vector x = Vector::Zero(s.n);
                for (Index j : random_subset(s.n, s.s, rng)) x(j) = rng.normal();
                return x;
            },
            [&](const CosparseSet& c) -> Vector {
                for (int attempt = 0; attempt < 100; ++attempt) {
                    const Matrix null = cosparse_null_space(c.analysis, random_subset(c.analysis.rows(), c.l, rng));
                    if (null.cols() == 0) continue;
                    Vector g(null.cols());
                    for (Index k = 0; k < g.size(); ++k) g(k) = rng.normal();
                    return null * g;
                }
                throw InfeasibleError("cosparse sampler: every drawn cosupport has a trivial null space");
            },
            [&](const LowRankSet& l) -> Vector {
                const Matrix u = gaussian_matrix(l.n1, l.r, rng);
                const Matrix w = gaussian_matrix(l.n2, l.r, rng);
                const Matrix x = u * w.transpose();
                Vector flat(l.n1 * l.n2);
                for (Index a = 0; a < l.n1; ++a)
                    for (Index b = 0; b < l.n2; ++b) flat(a * l.n2 + b) = x(a, b);
                return flat;
            },
            [&](const TuckerSet& t) -> Vector { return sample_tucker(t, rng); },
            [&](const UnionSet& u) -> Vector {
                const auto& s = u.subspaces[rng.below(u.subspaces.size())];
                Vector g(s.dim());
                for (Index k = 0; k < g.size(); ++k) g(k) = rng.normal();
                return s.basis() * g;
            },
            [&](const ManifoldSet& m) -> Vector {
                return sample_manifold(m.spec, 1, rng.next_u64()).front().x;
            },
        },
        v);
}

}  // namespace

PointSet sample(const StructuredSet& set, Index count, std::uint64_t seed, Normalization norm) {
    if (count < 1) throw InvalidArgument("sample: count must be positive");
    const bool unit = norm == Normalization::unit || (norm == Normalization::automatic && set.is_cone());
    Rng rng(seed, 0x73616d70);
    Matrix out(set.ambient_dim(), count);
    for (Index i = 0; i < count; ++i) {
        Vector x = sample_one(set.value(), i, rng);
        if (unit) {
            const double r = x.norm();
            if (r < kDegenerateNorm) throw InfeasibleError("sample: drew a zero vector; cannot normalize");
            x /= r;
        }
        out.col(i) = x;
    }
    return PointSet(std::move(out));
}

bool contains(const StructuredSet& set, const Vector& x, double tol) {
    if (x.size() != set.ambient_dim()) return false;
    const double scale = std::max(1.0, x.norm());
    return std::visit(
        Overloaded{
            [&](const FiniteSet& f) {
                for (Index i = 0; i < f.points.size(); ++i)
                    if ((f.points.point(i) - x).norm() <= tol * scale) return true;
                return false;
            },
            [&](const SparseSet& s) { return (x.array().abs() > tol * scale).count() <= s.s; },
            [&](const CosparseSet& c) {
                const Vector r = c.analysis * x;
                Index zeros = 0;
                for (Index i = 0; i < r.size(); ++i)
                    if (std::abs(r(i)) <= tol * scale * std::max(1.0, c.analysis.row(i).norm())) ++zeros;
                return zeros >= c.l;
            },
            [&](const LowRankSet& l) {
                Matrix m(l.n1, l.n2);
                for (Index a = 0; a < l.n1; ++a)
                    for (Index b = 0; b < l.n2; ++b) m(a, b) = x(a * l.n2 + b);
                return numerical_rank(m, tol) <= l.r;
            },
            [&](const TuckerSet& t) {
                for (std::size_t mode = 0; mode < t.dims.size(); ++mode)
                    if (numerical_rank(unfold(x, t.dims, mode), tol) > t.ranks[mode]) return false;
                return true;
            },
            [&](const UnionSet& u) {
                for (const auto& s : u.subspaces)
                    if ((x - s.basis() * (s.basis().transpose() * x)).norm() <= tol * scale) return true;
                return false;
            },
            [&](const ManifoldSet& m) {
                const auto& spec = m.spec;
                const Index used = spec.shape == ManifoldShape::circle ? 2 : 3;
                if (x.tail(spec.ambient - used).norm() > tol * scale) return false;
                switch (spec.shape) {
                    case ManifoldShape::circle:
                    case ManifoldShape::sphere2: return std::abs(x.head(used).norm() - spec.radius) <= tol * scale;
                    case ManifoldShape::helix: {
                        const double t = x(2) / spec.b;
                        if (t < -tol || t > spec.t_max + tol) return false;
                        return (curve_point(spec, t).x - x).norm() <= tol * scale;
                    }
                }
                return false;
            },
        },
        set.value());
}

PointSet manifold_curve(const ManifoldSpec& spec, std::span<const double> grid) {
    if (!spec.is_curve()) throw InvalidArgument("manifold_curve: manifold is not a curve");
    if (grid.empty()) throw InvalidArgument("manifold_curve: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("manifold_curve: grid must be strictly increasing");
    Matrix out(spec.ambient, static_cast<Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) out.col(static_cast<Index>(i)) = curve_point(spec, grid[i]).x;
    return PointSet(std::move(out));
}

double polyline_length(const PointSet& points) {
    double total = 0.0;
    for (Index i = 1; i < points.size(); ++i) total += (points.point(i) - points.point(i - 1)).norm();
    return total;
}

PointSet gaussian_cloud(Index count, Index n, std::uint64_t seed) {
    if (count < 1 || n < 1) throw InvalidArgument("gaussian_cloud: count and n must be positive");
    Rng rng(seed, 0x636c6f75);
    return PointSet(gaussian_matrix(n, count, rng));
}

void write_pointset_csv(std::ostream& out, const PointSet& points) {
    std::vector<std::string> cells(static_cast<std::size_t>(points.dim()));
    for (Index j = 0; j < points.dim(); ++j) cells[static_cast<std::size_t>(j)] = "x" + std::to_string(j);
    csv::write_row(out, cells);
    for (Index i = 0; i < points.size(); ++i) {
        for (Index j = 0; j < points.dim(); ++j) cells[static_cast<std::size_t>(j)] = csv::format(points.matrix()(j, i));
        csv::write_row(out, cells);
    }
}

PointSet read_pointset_csv(std::istream& in) {
    std::vector<Vector> pts;
    std::string line;
    bool first = true;
    while (csv::next_line(in, line)) {
        if (first && !csv::is_numeric_row(line)) {
            first = false;
            continue;
        }
        first = false;
        const auto cells = csv::split_line(line);
        Vector p(static_cast<Index>(cells.size()));
        for (std::size_t j = 0; j < cells.size(); ++j) p(static_cast<Index>(j)) = csv::parse_double(cells[j]);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw FormatError("point CSV contains no points");
    return PointSet(pts);
}

}  // namespace sketchlab

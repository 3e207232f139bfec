#include "sketchlab/experiments.hpp"

#include "sketchlab/csv.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <memory>
#include <numeric>

namespace sketchlab {

std::vector<Index> linear_grid(Index start, Index stop, Index step) {
    if (start < 1 || step < 1 || stop < start) throw InvalidArgument("grid needs 1 <= start <= stop and step >= 1");
    std::vector<Index> out;
    for (Index m = start; m <= stop; m += step) out.push_back(m);
    return out;
}

std::vector<Index> geometric_grid(Index lo, Index hi, Index count) {
    if (lo < 1 || hi < lo || count < 1) throw InvalidArgument("geometric grid needs 1 <= lo <= hi and count >= 1");
    std::vector<Index> out;
    for (Index k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        const auto m = static_cast<Index>(std::llround(static_cast<double>(lo) *
                                                       std::pow(static_cast<double>(hi) / static_cast<double>(lo), t)));
        if (out.empty() || m > out.back()) out.push_back(m);
    }
    return out;
}

std::vector<Index> parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
    if (b == std::string::npos) throw InvalidArgument("grid must look like start:stop:step, got '" + text + "'");
    return linear_grid(csv::parse_integer(text.substr(0, a)), csv::parse_integer(text.substr(a + 1, b - a - 1)),
                       csv::parse_integer(text.substr(b + 1)));
}

std::vector<double> epsilon_by_rows(const PointSet& points, Family family, double q,
                                    const std::vector<Index>& m_grid, std::uint64_t seed) {
    if (m_grid.empty()) throw InvalidArgument("empty m grid");
    if (!std::is_sorted(m_grid.begin(), m_grid.end()) || m_grid.front() < 1)
        throw InvalidArgument("m grid must be ascending and positive");
    const Index n = points.dim();
    const Index p = points.size();
    const Index m_max = m_grid.back();
    SketchSpec spec;
    spec.family = family;
    spec.q = q;
    spec.m = m_max;
    spec.n = n;
    spec.seed = seed;
    Matrix g(m_max, n);
    for (Index i = 0; i < m_max; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = sketch_entry(spec, i, j);
    const Matrix y = g * points.matrix();

    std::vector<std::pair<Index, Index>> pairs;
    std::vector<double> d2;
    for (Index j = 1; j < p; ++j)
        for (Index i = 0; i < j; ++i) {
            const double d = (points.point(i) - points.point(j)).squaredNorm();
            if (std::sqrt(d) < kDegenerateNorm) continue;
            pairs.emplace_back(i, j);
            d2.push_back(d);
        }
    if (pairs.empty()) throw EmptySetError("all points coincide");

    std::vector<double> out;
    out.reserve(m_grid.size());
    Matrix gram = Matrix::Zero(p, p);
    Index done = 0;
    for (Index m : m_grid) {
        if (m > done) {
            const auto block = y.middleRows(done, m - done);
            gram.noalias() += block.transpose() * block;
            done = m;
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        double worst = 0.0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [i, j] = pairs[k];
            const double proj = (gram(i, i) + gram(j, j) - 2.0 * gram(i, j)) * inv_m;
            worst = std::max(worst, std::abs(proj / d2[k] - 1.0));
        }
        out.push_back(worst);
    }
    return out;
}

std::vector<double> median_epsilon_curve(const PointSet& points, Family family, double q,
                                         const std::vector<Index>& m_grid, Index trials, std::uint64_t seed,
                                         Index jobs) {
    if (trials < 1) throw InvalidArgument("need at least one trial");
    const auto curves = parallel_map(static_cast<std::size_t>(trials), static_cast<std::size_t>(std::max<Index>(1, jobs)),
                                     [&](std::size_t t) { return epsilon_by_rows(points, family, q, m_grid, seed + t); });
    std::vector<double> out(m_grid.size());
    std::vector<double> column(curves.size());
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
        for (std::size_t t = 0; t < curves.size(); ++t) column[t] = curves[t][k];
        out[k] = median(column);
    }
    return out;
}

Index minimal_m(const std::vector<Index>& m_grid, const std::vector<double>& values, double target) {
    if (m_grid.size() != values.size()) throw DimensionMismatch("grid and values differ in length");
    for (std::size_t k = 0; k < m_grid.size(); ++k)
        if (values[k] <= target) return m_grid[k];
    return 0;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line needs two or more paired values");
    const double k = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidArgument("fit_line needs distinct abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 1.0;
    return f;
}

PointSet benchmark_cloud(const JLBenchmark& b) { return gaussian_cloud(b.points, b.n, b.data_seed); }

BoundModel jl_model(const JLBenchmark& b) {
    BoundModel model;
    model.variant = BoundVariant::jl_finite;
    model.set("points", static_cast<double>(b.points)).set("eps", b.eps).set("eta", b.eta);
    return model;
}

CalibrationConfig jl_calibration(const JLBenchmark& b, Index trials, std::uint64_t seed, Index jobs, Index max_m) {
    CalibrationConfig cfg;
    cfg.model = jl_model(b);
    cfg.alpha = family_alpha(b.family, b.q);
    cfg.target = b.eps;
    cfg.eta = b.eta;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.max_m = max_m > 0 ? max_m : b.n;
    auto cloud = std::make_shared<PointSet>(benchmark_cloud(b));
    const Family family = b.family;
    const double q = b.q;
    const Index n = b.n;
    cfg.measure = [cloud, family, q, n](Index m, std::uint64_t s) {
        SketchSpec spec;
        spec.family = family;
        spec.q = q;
        spec.m = m;
        spec.n = n;
        spec.seed = s;
        return epsilon_mc(build_sketch(spec), *cloud);
    };
    return cfg;
}

double sparse_rip_trial(Family family, double q, Index m, Index n, Index s, std::uint64_t seed) {
    SketchSpec spec;
    spec.family = family;
    spec.q = q;
    spec.m = m;
    spec.n = n;
    spec.seed = seed;
    return exact_sparse_rip(build_sketch(spec), s);
}

Vector sparse_signal(Index n, Index s, std::uint64_t seed) {
    if (s < 1 || s > n) throw InvalidArgument("sparse_signal needs 1 <= s <= n");
    Rng rng(seed, 0x73706172);
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index k = 0; k < s; ++k) {
        const auto pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - k))) + k;
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick)]);
    }
    Vector x = Vector::Zero(n);
    for (Index k = 0; k < s; ++k) x(idx[static_cast<std::size_t>(k)]) = rng.normal();
    return x;
}

RecoveryTrial recovery_trial(const RecoverySetup& setup, std::uint64_t seed) {
    SketchSpec spec;
    spec.family = setup.family;
    spec.q = setup.q;
    spec.m = setup.m;
    spec.n = setup.n;
    spec.seed = seed;
    const Sketch sketch = build_sketch(spec);
    const Vector x = sparse_signal(setup.n, setup.s, mix64(seed ^ 0x5eedULL));
    RecoveryTrial t;
    t.result = iht(sketch, sketch.matrix() * x, setup.s, setup.options);
    t.relative_error = relative_error(x, t.result.estimate);
    t.success = t.relative_error <= setup.success_tol;
    return t;
}

PhasePoint recovery_phase_point(const RecoverySetup& setup, Index trials, std::uint64_t seed, Index jobs) {
    if (trials < 1) throw InvalidArgument("need at least one trial");
    const auto runs = parallel_map(static_cast<std::size_t>(trials), static_cast<std::size_t>(std::max<Index>(1, jobs)),
                                   [&](std::size_t t) { return recovery_trial(setup, seed + t); });
    PhasePoint p;
    p.m = setup.m;
    p.trials = trials;
    std::vector<double> errors;
    for (const auto& r : runs) {
        p.successes += r.success ? 1 : 0;
        errors.push_back(r.relative_error);
    }
    p.interval = wilson_interval(p.successes, trials);
    p.median_error = median(errors);
    return p;
}

std::vector<double> curve_grid(const ManifoldSpec& spec, Index points) {
    if (points < 2) throw InvalidArgument("curve grid needs two or more points");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (Index k = 0; k < points; ++k)
        t[static_cast<std::size_t>(k)] = spec.t_max * static_cast<double>(k) / static_cast<double>(points - 1);
    return t;
}

double curve_trial(const ManifoldSpec& spec, Family family, double q, Index m, std::uint64_t seed,
                   Index grid_points) {
    SketchSpec s;
    s.family = family;
    s.q = q;
    s.m = m;
    s.n = spec.ambient;
    s.seed = seed;
    const auto grid = curve_grid(spec, grid_points);
    return curve_length_distortion(build_sketch(s), spec, grid);
}

CoveringProfile circle_tangent_profile() { return CoveringProfile::analytic(1.0, 1.0 + std::numbers::pi / 2.0, 1.0); }

}  // namespace sketchlab

#include <doctest.h>

#include "oracles.hpp"

#include "sketchlab/distortion.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/experiments.hpp"
#include "sketchlab/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

using namespace sketchlab;

namespace {

Sketch gaussian(Index m, Index n, std::uint64_t seed) {
    SketchSpec s;
    s.m = m;
    s.n = n;
    s.seed = seed;
    return build_sketch(s);
}

/// Brute-force delta_s: every support, closed-form eigenvalues of Phi_S^T Phi_S - I.
double oracle_rip(const Matrix& phi, int s) {
    double worst = 0.0;
    std::vector<int> cur;
    oracle::subsets(static_cast<int>(phi.cols()), s, cur, 0, [&](const std::vector<int>& support) {
        std::vector<double> g(static_cast<std::size_t>(s * s));
        for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b) {
                double dot = 0.0;
                for (Index r = 0; r < phi.rows(); ++r) dot += phi(r, support[a]) * phi(r, support[b]);
                g[static_cast<std::size_t>(a * s + b)] = dot - (a == b ? 1.0 : 0.0);
            }
        for (double e : oracle::sym_eigenvalues(g, s)) worst = std::max(worst, std::abs(e));
    });
    return worst;
}

std::vector<double> full_grid(const ManifoldSpec& spec, Index points) { return curve_grid(spec, points); }

}  // namespace

TEST_SUITE("distortion") {

TEST_CASE("identity and doubled identity") {
    const Sketch id = sketch_from_matrix(Matrix::Identity(5, 5));
    const Sketch twice = sketch_from_matrix(2.0 * Matrix::Identity(5, 5));
    const StructuredSet sparse = StructuredSet::sparse(5, 2);
    CHECK(kappa_mc(id, sparse, 100, 1) <= 1e-15);
    CHECK(kappa_mc(twice, sparse, 100, 1) == doctest::Approx(3.0).epsilon(1e-12));

    const PointSet p = gaussian_cloud(8, 5, 2);
    CHECK(epsilon_mc(id, p) <= 1e-15);
    CHECK(zeta_mc(id, p) <= 1e-12);
    CHECK(delta_exact(twice, p) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(epsilon_unsquared(twice, p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kappa shrinks as m grows") {
    const StructuredSet sphere = StructuredSet::union_of({Subspace(Matrix::Identity(50, 50))});
    double prev = std::numeric_limits<double>::infinity();
    for (Index m : {200, 800, 3200}) {
        const double k = kappa_mc(gaussian(m, 50, 3), sphere, 10000, 4);
        CHECK(k > 0.0);
        CHECK(k < 1.0);
        CHECK(k < prev);
        prev = k;
    }
}

TEST_CASE("exact sparse rip on orthonormal columns") {
    CHECK(exact_sparse_rip(sketch_from_matrix(Matrix::Identity(6, 6)), 1) <= 1e-15);
    CHECK(exact_sparse_rip(sketch_from_matrix(Matrix::Identity(6, 6)), 3) <= 1e-15);
}

TEST_CASE("exact sparse rip matches the brute-force oracle") {
    const Sketch sk = gaussian(4, 6, 5);
    CHECK(std::abs(exact_sparse_rip(sk, 2) - oracle_rip(sk.matrix(), 2)) <= 1e-10);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Sketch a = gaussian(5, 9, seed);
        for (int s = 1; s <= 3; ++s) CHECK(std::abs(exact_sparse_rip(a, s) - oracle_rip(a.matrix(), s)) <= 1e-10);
    }
}

TEST_CASE("sparse rip constants are nested") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Sketch sk = gaussian(6, 10, seed);
        const double d1 = exact_sparse_rip(sk, 1), d2 = exact_sparse_rip(sk, 2), d3 = exact_sparse_rip(sk, 3);
        CHECK(d1 <= d2 + 1e-12);
        CHECK(d2 <= d3 + 1e-12);
    }
}

TEST_CASE("sparse rip guard") {
    CHECK_THROWS_AS(exact_sparse_rip(gaussian(4, 40, 0), 6), InfeasibleError);
    CHECK_THROWS_AS(exact_sparse_rip(gaussian(4, 6, 0), 7), InvalidArgument);
}

TEST_CASE("exact subspace rip") {
    CHECK(exact_subspace_rip(sketch_from_matrix(Matrix::Identity(4, 4)), {Subspace(Matrix::Identity(4, 4))}) <= 1e-15);
    const Sketch sk = gaussian(5, 8, 6);
    std::vector<Subspace> coords;
    for (const auto& s : enumerate_supports(8, 2)) coords.push_back(Subspace::coordinate(8, s));
    CHECK(std::abs(exact_subspace_rip(sk, coords) - exact_sparse_rip(sk, 2)) <= 1e-12);

    Rng rng(7);
    std::vector<Subspace> planes;
    for (int i = 0; i < 2; ++i) {
        Matrix g(20, 2);
        for (Index a = 0; a < 20; ++a)
            for (Index b = 0; b < 2; ++b) g(a, b) = rng.normal();
        planes.push_back(Subspace::span_of(g));
    }
    const Sketch wide = gaussian(16, 20, 8);
    const double exact = exact_subspace_rip(wide, planes);
    CHECK(kappa_mc(wide, StructuredSet::union_of(planes), 5000, 9) <= exact + 1e-12);
}

TEST_CASE("definitional identities on finite sets") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const PointSet p = gaussian_cloud(12, 7, 100 + seed);
        const Sketch sk = gaussian(4, 7, seed);
        CHECK(std::abs(delta_exact(sk, p) - kappa(sk, normalized_vectors(p))) <= 1e-12);
        CHECK(std::abs(epsilon_mc(sk, p) - kappa(sk, normalized_chords(p))) <= 1e-12);
        CHECK(std::abs(zeta_mc(sk, p) - kappa(sk, chords(p))) <= 1e-12);
        const double diam = euclidean_diameter(p);
        CHECK(zeta_mc(sk, p) <= epsilon_mc(sk, p) * diam * diam + 1e-12);
    }
}

TEST_CASE("pair measures need two distinct points") {
    const Sketch sk = gaussian(2, 3, 0);
    const PointSet one(std::vector<Vector>{Vector::Ones(3)});
    CHECK_THROWS_AS(epsilon_mc(sk, one), EmptySetError);
    CHECK_THROWS_AS(zeta_mc(sk, one), EmptySetError);
    CHECK_THROWS_AS(kappa(sk, gaussian_cloud(3, 4, 0)), DimensionMismatch);
}

TEST_CASE("squared budget for the unsquared precision") {
    CHECK(eps_no_squares(0.5) == 0.75);
    CHECK(eps_no_squares(1.0 - 1e-9) == doctest::Approx(1.0));
    CHECK_THROWS_AS(eps_no_squares(0.0), InvalidArgument);
    CHECK_THROWS_AS(eps_no_squares(1.0), InvalidArgument);

    Rng rng(10);
    int exercised = 0;
    for (int t = 0; t < 1000; ++t) {
        const Index n = 3 + static_cast<Index>(rng.below(10));
        const Index m = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(3 * n)));
        const PointSet p = gaussian_cloud(2 + static_cast<Index>(rng.below(8)), n, rng.next_u64());
        const Sketch sk = gaussian(m, n, rng.next_u64());
        const double eps_hat = 0.05 + 0.9 * rng.uniform();
        if (epsilon_mc(sk, p) <= eps_no_squares(eps_hat)) {
            ++exercised;
            CHECK(epsilon_unsquared(sk, p) <= eps_hat + 1e-12);
        }
    }
    CHECK(exercised > 100);
}

TEST_CASE("curve length distortion of scaled identities") {
    const ManifoldSpec circle = ManifoldSpec::circle(1.0, 3);
    const auto grid = full_grid(circle, 16);
    CHECK(curve_length_distortion(sketch_from_matrix(Matrix::Identity(3, 3)), circle, grid) <= 1e-12);
    for (double c : {0.5, 1.7, 3.0})
        CHECK(curve_length_distortion(sketch_from_matrix(c * Matrix::Identity(3, 3)), circle, grid) ==
              doctest::Approx(std::abs(c - 1.0)).epsilon(1e-10));
    const ManifoldSpec helix = ManifoldSpec::helix(1.0, 0.3, 3);
    CHECK(curve_length_distortion(sketch_from_matrix(2.0 * Matrix::Identity(3, 3)), helix, full_grid(helix, 8)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    const std::vector<double> one{0.0};
    CHECK_THROWS_AS(curve_length_distortion(sketch_from_matrix(Matrix::Identity(3, 3)), circle, one), InvalidArgument);
}

TEST_CASE("curve length distortion converges under refinement") {
    const ManifoldSpec circle = ManifoldSpec::circle(1.0, 10);
    const Sketch sk = gaussian(6, 10, 11);
    const double coarse = curve_length_distortion(sk, circle, full_grid(circle, 16));
    const double fine = curve_length_distortion(sk, circle, full_grid(circle, 4096));
    CHECK(std::abs(coarse - fine) <= 1e-4);
}

TEST_CASE("failure rate extremes") {
    const auto measure = [](std::uint64_t seed) { return epsilon_mc(gaussian(5, 10, seed), gaussian_cloud(6, 10, 1)); };
    const FailureRate none = failure_rate(measure, std::numeric_limits<double>::infinity(), 20, 0);
    CHECK(none.failures == 0);
    CHECK(none.rate == 0.0);
    CHECK(none.interval.lower == 0.0);
    const FailureRate all = failure_rate(measure, 0.0, 20, 0);
    CHECK(all.rate == 1.0);
    CHECK(all.interval.upper == 1.0);
    CHECK_THROWS_AS(failure_rate(measure, 1.0, 5, 0), InvalidArgument);
}

TEST_CASE("failure rate does not depend on the number of workers") {
    const auto measure = [](std::uint64_t seed) { return sparse_rip_trial(Family::gaussian, 1.0, 8, 16, 2, seed); };
    const FailureRate a = failure_rate(measure, 0.8, 24, 3, 1);
    const FailureRate b = failure_rate(measure, 0.8, 24, 3, 4);
    CHECK(a.measurements == b.measurements);
    CHECK(a.failures == b.failures);
}

TEST_CASE("wilson interval") {
    const WilsonInterval w = wilson_interval(10, 100);
    CHECK(w.lower == doctest::Approx(0.05522).epsilon(1e-3));
    CHECK(w.upper == doctest::Approx(0.17437).epsilon(1e-3));
    const WilsonInterval z = wilson_interval(0, 50);
    CHECK(z.lower == 0.0);
    CHECK(z.upper > 0.0);
    CHECK_THROWS_AS(wilson_interval(3, 2), InvalidArgument);
}

TEST_CASE("doubling m does not raise the failure rate on the sparse benchmark") {
    const Index n = 64, s = 2, trials = 100;
    const auto at = [&](Index m) {
        return [=](std::uint64_t seed) { return sparse_rip_trial(Family::gaussian, 1.0, m, n, s, seed); };
    };
    const double target = median(failure_rate(at(16), 0.0, 50, 9000).measurements);
    double upper = 1.0;
    for (Index m : {16, 32, 64}) {
        const FailureRate r = failure_rate(at(m), target, trials, 100);
        CHECK(r.rate <= upper);
        upper = r.interval.upper;
    }
}

TEST_CASE("monte carlo values are dominated by larger samples and by exact values") {
    const StructuredSet sparse = StructuredSet::sparse(10, 2);
    const Sketch sk = gaussian(6, 10, 12);
    const PointSet all = sample(sparse, 400, 13);
    double prev = 0.0;
    for (Index k : {10, 50, 100, 400}) {
        const PointSet prefix(Matrix(all.matrix().leftCols(k)));
        const double v = kappa(sk, prefix);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev <= exact_sparse_rip(sk, 2) + 1e-12);
    CHECK(kappa_mc(sk, sparse, 400, 13) == prev);
}

TEST_CASE("reports") {
    const Sketch sk = gaussian(6, 10, 14);
    const DistortionReport exact = measure_set(sk, StructuredSet::sparse(10, 2), 0, 1);
    CHECK(exact.mode == ReportMode::exact);
    CHECK(*exact.delta == exact_sparse_rip(sk, 2));
    CHECK(*exact.epsilon == exact_sparse_rip(sk, 4));
    CHECK_FALSE(exact.kappa.has_value());

    const DistortionReport finite = measure_set(sk, StructuredSet::finite(gaussian_cloud(5, 10, 2)), 0, 1);
    CHECK(finite.kappa.has_value());
    CHECK(finite.zeta.has_value());

    const DistortionReport mc = measure_set(sk, StructuredSet::lowrank(2, 5, 1), 200, 3);
    CHECK(mc.mode == ReportMode::monte_carlo);
    CHECK(mc.samples == 200);
    CHECK_FALSE(mc.zeta.has_value());

    const DistortionReport curve = measure_set(sk, StructuredSet::manifold(ManifoldSpec::circle(1.0, 10)), 100, 3);
    CHECK(curve.kappa.has_value());
    CHECK(curve.zeta.has_value());

    std::ostringstream out;
    write_report_header(out);
    write_report_row(out, exact);
    const std::string text = out.str();
    CHECK(text.rfind("set_id,family,m,n,mode,samples,kappa,delta,epsilon,zeta,seed\nsparse,gaussian,6,10,exact,45,,", 0) == 0);
}

TEST_CASE("long chords") {
    const LongChordReport r = check_long_chords(20000, 5, 1);
    CHECK(r.checked == 20000);
    CHECK(r.violations == 0);
    CHECK(r.worst_ratio <= 1.0);
    CHECK(chord_map(Vector::Zero(2), Vector::Unit(2, 1) * 3.0) == Vector::Unit(2, 1));
    CHECK_THROWS_AS(chord_map(Vector::Ones(2), Vector::Ones(2)), InvalidArgument);
}

TEST_CASE("short chords on the circle and sphere") {
    for (const auto& spec : {ManifoldSpec::circle(1.0, 3), ManifoldSpec::circle(2.5, 4), ManifoldSpec::sphere2(1.5, 3)}) {
        const ShortChordReport r = check_short_chords(spec, *spec.known_reach(), 20000, 2);
        CHECK(r.checked == 20000);
        CHECK(r.iota_violations == 0);
        CHECK(r.finsler_violations == 0);
        CHECK(r.iota_lower_bound <= 2.0 / *spec.known_reach() + 1e-12);
    }
}

TEST_CASE("iota lower bound on the circle") {
    // every chord of a circle leaves the tangent at rate 1 / (2R)
    const double radius = 2.0;
    const double iota = iota_lower_bound(ManifoldSpec::circle(radius, 2), 20000, 3);
    CHECK(iota == doctest::Approx(0.5 / radius).epsilon(1e-3));
}

TEST_CASE("iota lower bound on the helix") {
    const ManifoldSpec helix = ManifoldSpec::helix(1.0, 1.0, 3);
    const double a = iota_lower_bound(helix, 2000, 4);
    const double b = iota_lower_bound(helix, 20000, 4);
    CHECK(a > 0.0);
    CHECK(std::isfinite(b));
    // curvature of the helix is a / (a^2 + b^2) = 1/2; short chords see half of it
    CHECK(b >= 0.2);
}

TEST_CASE("median") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), EmptySetError);
}

}

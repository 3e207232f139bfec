#include <doctest.h>

#include "sketchlab/error.hpp"
#include "sketchlab/experiments.hpp"
#include "sketchlab/random.hpp"
#include "sketchlab/recovery.hpp"

#include <cmath>

using namespace sketchlab;

namespace {

Sketch gaussian(Index m, Index n, std::uint64_t seed) {
    SketchSpec s;
    s.m = m;
    s.n = n;
    s.seed = seed;
    return build_sketch(s);
}

Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

std::vector<Subspace> coordinate_family(Index n, Index s) {
    std::vector<Subspace> out;
    for (const auto& support : enumerate_supports(n, s)) out.push_back(Subspace::coordinate(n, support));
    return out;
}

}  // namespace

TEST_SUITE("recovery") {

TEST_CASE("hard threshold examples") {
    CHECK(hard_threshold(v3(3, -5, 1), 1) == v3(0, -5, 0));
    CHECK(hard_threshold(v3(3, -5, 1), 3) == v3(3, -5, 1));
    CHECK(hard_threshold(v3(2, -2, 2), 2) == v3(2, -2, 0));
    CHECK(hard_threshold(v3(1, 1, 1), 1) == v3(1, 0, 0));
    CHECK_THROWS_AS(hard_threshold(v3(1, 2, 3), 0), InvalidArgument);
    CHECK_THROWS_AS(hard_threshold(v3(1, 2, 3), 4), InvalidArgument);
}

TEST_CASE("hard threshold is the best sparse approximation") {
    Rng rng(1);
    const Index n = 12, s = 3;
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.normal();
    const double best = (x - hard_threshold(x, s)).norm();
    const StructuredSet sparse = StructuredSet::sparse(n, s);
    const PointSet zs = sample(sparse, 1000, 2, Normalization::raw);
    for (Index k = 0; k < zs.size(); ++k) CHECK(best <= (x - Vector(zs.point(k))).norm());
    // projections of x onto random supports are the strongest competitors
    for (const auto& support : enumerate_supports(n, s)) {
        Vector z = Vector::Zero(n);
        for (Index i : support) z(i) = x(i);
        CHECK(best <= (x - z).norm());
    }
}

TEST_CASE("project_uos examples") {
    const std::vector<Subspace> family = {Subspace::coordinate(4, {0, 1}), Subspace::coordinate(4, {2})};
    Vector inside(4);
    inside << 0.3, -0.7, 0.0, 0.0;
    CHECK(project_uos(inside, family) == inside);
    Vector ortho(4);
    ortho << 0.0, 0.0, 0.0, 2.0;
    CHECK(project_uos(ortho, family).isZero(0.0));

    Rng rng(3);
    const auto coords = coordinate_family(7, 2);
    for (int t = 0; t < 200; ++t) {
        Vector x(7);
        for (Index i = 0; i < 7; ++i) x(i) = rng.normal();
        CHECK(project_uos(x, coords) == hard_threshold(x, 2));
    }
    CHECK_THROWS_AS(project_uos(inside, {}), EmptySetError);
}

TEST_CASE("project_uos ties go to the first subspace") {
    const std::vector<Subspace> family = {Subspace::coordinate(2, {0}), Subspace::coordinate(2, {1})};
    Vector x(2);
    x << 1.0, -1.0;
    Vector expected(2);
    expected << 1.0, 0.0;
    CHECK(project_uos(x, family) == expected);
}

TEST_CASE("orthogonal sketch recovers in one iteration") {
    const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(16, 16, 4).matrix()).householderQ();
    const Sketch sk = sketch_from_matrix(q);
    const Vector x = sparse_signal(16, 3, 5);
    const RecoveryResult r = iht(sk, sk.matrix() * x, 3);
    CHECK(r.status == RecoveryStatus::converged);
    CHECK(r.iterations == 1);
    CHECK(relative_error(x, r.estimate) <= 1e-12);
}

TEST_CASE("landweber on coordinate subspaces is iterative hard thresholding, iterate by iterate") {
    const Index n = 10, s = 2, m = 6;
    const StructuredSet uos = StructuredSet::union_of(coordinate_family(n, s));
    for (StepRule rule : {StepRule::fixed, StepRule::normalized}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Sketch sk = gaussian(m, n, seed);
            const Vector y = sk.matrix() * sparse_signal(n, s, seed + 100);
            RecoveryOptions opts;
            opts.step = rule;
            opts.mu = rule == StepRule::fixed ? 0.7 : 1.0;
            opts.max_iters = 40;
            opts.record_iterates = true;
            const RecoveryResult a = iht(sk, y, s, opts);
            const RecoveryResult b = landweber_recover(RecoveryProblem{sk, y, uos, 0.0}, opts);
            CHECK(a.status == b.status);
            CHECK(a.iterations == b.iterations);
            REQUIRE(a.iterates.size() == b.iterates.size());
            for (std::size_t k = 0; k < a.iterates.size(); ++k) CHECK(a.iterates[k] == b.iterates[k]);
            CHECK(a.residuals == b.residuals);
        }
    }
}

TEST_CASE("estimates lie in the model and the running minimum does not increase") {
    const StructuredSet sparse = StructuredSet::sparse(40, 3);
    const StructuredSet planes = StructuredSet::union_of(rotating_plane_family(40).discretize(9));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Sketch sk = gaussian(16, 40, seed);
        RecoveryOptions opts;
        opts.step = seed % 2 ? StepRule::normalized : StepRule::fixed;
        for (const auto* model : {&sparse, &planes}) {
            const Vector x = sample(*model, 1, seed + 7).point(0);
            const RecoveryResult r = landweber_recover(RecoveryProblem{sk, sk.matrix() * x, *model, 0.0}, opts);
            CHECK(contains(*model, r.estimate, 1e-10));
            CHECK(r.residuals.size() == static_cast<std::size_t>(r.iterations + 1));
            if (r.status == RecoveryStatus::converged) {
                CHECK(r.residuals.back() <= opts.tol);
                double running = r.residuals.front();
                for (double v : r.residuals) {
                    const double next = std::min(running, v);
                    CHECK(next <= running);
                    running = next;
                }
            }
        }
    }
}

TEST_CASE("recovery on a union of planes") {
    const Index n = 30;
    const auto family = rotating_plane_family(n).discretize(11);
    const StructuredSet model = StructuredSet::union_of(family);
    Index successes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Sketch sk = gaussian(12, n, seed);
        const Vector x = sample(model, 1, seed + 50).point(0);
        RecoveryOptions opts;
        opts.step = StepRule::normalized;
        opts.max_iters = 200;
        const RecoveryResult r = landweber_recover(RecoveryProblem{sk, sk.matrix() * x, model, 0.0}, opts);
        successes += relative_error(x, r.estimate) <= 1e-6;
    }
    CHECK(successes >= 15);
}

TEST_CASE("undersampled recovery fails") {
    RecoverySetup setup;
    setup.m = setup.s;
    for (StepRule rule : {StepRule::fixed, StepRule::normalized}) {
        setup.options.step = rule;
        const PhasePoint p = recovery_phase_point(setup, 100, 1);
        CHECK(p.trials == 100);
        CHECK(p.successes <= 10);
    }
}

TEST_CASE("recovery phase point is independent of the worker count") {
    RecoverySetup setup;
    setup.options.step = StepRule::normalized;
    const PhasePoint a = recovery_phase_point(setup, 20, 9, 1);
    const PhasePoint b = recovery_phase_point(setup, 20, 9, 3);
    CHECK(a.successes == b.successes);
    CHECK(a.median_error == b.median_error);
}

TEST_CASE("bilipschitz check raises a warning") {
    const Sketch sk = gaussian(8, 16, 1);
    const Vector y = sk.matrix() * sparse_signal(16, 2, 2);
    RecoveryOptions opts;
    opts.eps_estimate = 0.3;
    CHECK(iht(sk, y, 2, opts).warning.has_value());
    opts.eps_estimate = 0.1;
    CHECK_FALSE(iht(sk, y, 2, opts).warning.has_value());
    opts.eps_estimate.reset();
    CHECK_FALSE(iht(sk, y, 2, opts).warning.has_value());
}

TEST_CASE("argument checks") {
    const Sketch sk = gaussian(4, 8, 0);
    RecoveryOptions opts;
    opts.mu = 0.0;
    CHECK_THROWS_AS(iht(sk, Vector::Zero(4), 2, opts), InvalidArgument);
    CHECK_THROWS_AS(iht(sk, Vector::Zero(5), 2), DimensionMismatch);
    CHECK_THROWS_AS(model_projection(StructuredSet::lowrank(2, 4, 1)), InvalidArgument);
    CHECK(parse_step_rule("normalized") == StepRule::normalized);
    CHECK_THROWS_AS(parse_step_rule("adaptive"), InvalidArgument);
    const RecoveryResult zero = iht(sk, Vector::Zero(4), 2);
    CHECK(zero.status == RecoveryStatus::converged);
    CHECK(zero.iterations == 0);
    CHECK(zero.estimate.isZero(0.0));
}

TEST_CASE("relative error") {
    CHECK(relative_error(v3(3, 4, 0), v3(3, 4, 0)) == 0.0);
    CHECK(relative_error(v3(3, 4, 0), v3(0, 0, 0)) == 1.0);
    CHECK(relative_error(v3(0, 0, 0), v3(0, 3, 4)) == 5.0);
}

}

// Desk-scale acceptance run. One PASS/FAIL line per criterion.

#include "oracles.hpp"

#include "sketchlab/bounds.hpp"
#include "sketchlab/complexity.hpp"
#include "sketchlab/distortion.hpp"
#include "sketchlab/experiments.hpp"
#include "sketchlab/random.hpp"
#include "sketchlab/sets.hpp"
#include "sketchlab/subspaces.hpp"

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace sketchlab;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
    std::printf("%s %d %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

void run(int id, const std::string& name, double budget, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget) {
        o.ok = false;
        o.detail += " over time budget";
    }
    report(id, name, o.ok, o.detail, secs);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Sketch gaussian(Index m, Index n, std::uint64_t seed) {
    SketchSpec s;
    s.m = m;
    s.n = n;
    s.seed = seed;
    return build_sketch(s);
}

double brute_rip(const Matrix& phi, int s) {
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

// plain loops over pairs, no library distortion code
struct Naive {
    double delta = 0.0, eps = 0.0, zeta = 0.0;
};

Naive naive_measures(const Matrix& phi, const Matrix& p) {
    Naive out;
    for (Index i = 0; i < p.cols(); ++i) {
        const double nx = p.col(i).norm();
        if (nx > 0.0) out.delta = std::max(out.delta, std::abs((phi * p.col(i)).squaredNorm() / (nx * nx) - 1.0));
        for (Index j = i + 1; j < p.cols(); ++j) {
            const Vector d = p.col(i) - p.col(j);
            const double d2 = d.squaredNorm();
            const double img = (phi * d).squaredNorm();
            out.zeta = std::max(out.zeta, std::abs(img - d2));
            if (d2 > 0.0) out.eps = std::max(out.eps, std::abs(img / d2 - 1.0));
        }
    }
    return out;
}

Matrix random_orthonormal(Index n, Index k, Rng& rng) {
    Matrix a(n, k);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < k; ++j) a(i, j) = rng.normal();
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.householderQ() * Matrix::Identity(n, k);
}

}  // namespace

int main() {
    run(1, "exact sparse rip matches brute force", 30.0, [] {
        double worst = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            for (Index m : {4, 8}) {
                const Sketch sk = gaussian(m, 12, 1000 + seed);
                for (int s = 1; s <= 3; ++s)
                    worst = std::max(worst, std::abs(exact_sparse_rip(sk, s) - brute_rip(sk.matrix(), s)));
            }
        return Outcome{worst <= 1e-10, fmt("max difference %.3g over 120 cases", worst)};
    });

    run(2, "definitional identities on finite sets", 60.0, [] {
        Rng rng(77);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const Index n = 2 + static_cast<Index>(rng.below(63));
            const Index count = 2 + static_cast<Index>(rng.below(29));
            const Index m = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            const PointSet p = gaussian_cloud(count, n, 5000 + t);
            const Sketch sk = gaussian(m, n, 6000 + t);
            const Naive ref = naive_measures(sk.matrix(), p.matrix());
            const double d = delta_exact(sk, p), e = epsilon_mc(sk, p), z = zeta_mc(sk, p);
            for (double gap : {d - kappa(sk, normalized_vectors(p)), e - kappa(sk, normalized_chords(p)),
                               z - kappa(sk, chords(p))})
                worst = std::max(worst, std::abs(gap));
            for (double gap : {(d - ref.delta) / std::max(1.0, ref.delta), (e - ref.eps) / std::max(1.0, ref.eps),
                               (z - ref.zeta) / std::max(1.0, ref.zeta)})
                worst = std::max(worst, std::abs(gap));
        }
        return Outcome{worst <= 1e-12, fmt("max discrepancy %.3g over 100 sets", worst)};
    });

    run(3, "finsler distance is the sine of the largest principal angle", 60.0, [] {
        Rng rng(303);
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const Index n = 2 + static_cast<Index>(rng.below(49));
            const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(10, n - 1))));
            const Subspace u(random_orthonormal(n, k, rng));
            const Subspace v(random_orthonormal(n, k, rng));
            const auto angles = principal_angles(u, v);
            const double largest = *std::max_element(angles.begin(), angles.end());
            worst = std::max(worst, std::abs(finsler_distance(u, v) - std::sin(largest)));
        }
        return Outcome{worst <= 1e-10, fmt("max difference %.3g over 1000 pairs", worst)};
    });

    run(4, "chord inequalities", 60.0, [] {
        const LongChordReport lc = check_long_chords(100000, 10, 404);
        const ShortChordReport sc = check_short_chords(ManifoldSpec::circle(1.0, 2), 1.0, 100000, 405);
        const bool ok = lc.checked == 100000 && sc.checked == 100000 && lc.violations == 0 &&
                        sc.iota_violations == 0 && sc.finsler_violations == 0;
        return Outcome{ok, fmt("long %.0f violations, iota %.0f, finsler %.0f", double(lc.violations),
                               double(sc.iota_violations), double(sc.finsler_violations)) +
                               fmt(" (worst ratios %.3f %.3f %.3f)", lc.worst_ratio, sc.worst_iota_ratio,
                                   sc.worst_finsler_ratio)};
    });

    run(5, "jl scaling", 300.0, [] {
        const auto grid = linear_grid(8, 2048, 8);
        std::vector<double> logs, ms;
        std::string detail = "minimal m";
        for (Index count : {10, 100, 1000}) {
            JLBenchmark b;
            b.points = count;
            const auto curve = median_epsilon_curve(benchmark_cloud(b), Family::gaussian, 1.0, grid, 21, 500);
            const Index m = minimal_m(grid, curve, b.eps);
            if (m == 0) return Outcome{false, "target not reached for |P| = " + std::to_string(count)};
            logs.push_back(std::log(static_cast<double>(count)));
            ms.push_back(static_cast<double>(m));
            detail += " " + std::to_string(m);
        }
        const double r = fit_line(logs, ms).correlation;

        JLBenchmark b;
        const auto geo = geometric_grid(128, 2048, 9);
        const auto curve = median_epsilon_curve(benchmark_cloud(b), Family::gaussian, 1.0, geo, 21, 700);
        std::vector<double> lx, ly;
        for (std::size_t k = 0; k < geo.size(); ++k) {
            lx.push_back(std::log(static_cast<double>(geo[k])));
            ly.push_back(std::log(curve[k]));
        }
        const double slope = fit_line(lx, ly).slope;
        return Outcome{r >= 0.9 && slope >= -0.6 && slope <= -0.4,
                       detail + fmt(", correlation %.4f, slope %.4f", r, slope)};
    });

    run(6, "recovery phase transition", 60.0, [] {
        RecoverySetup setup;
        setup.options.step = StepRule::normalized;
        setup.m = 32;
        const PhasePoint hi = recovery_phase_point(setup, 100, 6000);
        setup.m = 3;
        const PhasePoint lo = recovery_phase_point(setup, 100, 6000);
        return Outcome{hi.successes >= 95 && lo.successes <= 10,
                       fmt("m=32: %.0f/100, m=3: %.0f/100", double(hi.successes), double(lo.successes))};
    });

    run(7, "curve length preservation", 120.0, [] {
        JLBenchmark b;
        const CalibrationResult cal = calibrate_C(jl_calibration(b, 100, 7000, 1, 4 * b.n));
        if (!cal.C) return Outcome{false, "calibration did not converge"};
        BoundModel model;
        model.variant = BoundVariant::manifold_curves;
        model.set("eps", b.eps).set("eta", b.eta).set("K", 1.0);
        model.gamma2_profile = Gamma2Profile{circle_tangent_profile(), 1.0, std::nullopt};
        const double alpha = family_alpha(Family::gaussian, 1.0);
        const BoundResult bound = target_dimension(model, *cal.C, alpha);
        const ManifoldSpec circle = ManifoldSpec::circle(1.0, 100);
        Index good = 0;
        for (std::uint64_t t = 0; t < 100; ++t)
            good += curve_trial(circle, Family::gaussian, 1.0, bound.m, 7100 + t) <= b.eps ? 1 : 0;
        return Outcome{good >= 90, fmt("C = %.2f, m = %.0f, %.0f/100 within eps", *cal.C, double(bound.m),
                                       double(good))};
    });

    run(8, "sketch family equivalence", 120.0, [] {
        const Index n = 256, s = 2, m = 128, trials = 100;
        std::vector<double> base;
        for (std::uint64_t t = 0; t < 51; ++t) base.push_back(sparse_rip_trial(Family::gaussian, 1.0, m, n, s, 8000 + t));
        const double target = median(base);
        auto rate = [&](Family f, double q) {
            return failure_rate([&](std::uint64_t seed) { return sparse_rip_trial(f, q, m, n, s, seed); }, target,
                                trials, 8200);
        };
        const FailureRate g = rate(Family::gaussian, 1.0);
        const FailureRate a3 = rate(Family::achlioptas, 3.0);
        const bool overlap = g.interval.lower <= a3.interval.upper && a3.interval.lower <= g.interval.upper;

        std::vector<double> med;
        for (double q : {1.0, 3.0, 10.0}) {
            std::vector<double> v;
            for (std::uint64_t t = 0; t < 51; ++t) v.push_back(sparse_rip_trial(Family::achlioptas, q, m, n, s, 8400 + t));
            med.push_back(median(v));
        }
        const bool monotone = med[0] <= med[1] && med[1] <= med[2];
        return Outcome{overlap && monotone,
                       fmt("failures gaussian %.0f, achlioptas(3) %.0f;", double(g.failures), double(a3.failures)) +
                           fmt(" medians q=1,3,10: %.3f %.3f %.3f", med[0], med[1], med[2])};
    });

    run(9, "complexity sanity", 120.0, [] {
        const PointSet pm(std::vector<Vector>{Vector::Unit(3, 0), -Vector::Unit(3, 0)});
        const WidthEstimate w = gaussian_width_mc(pm, 20000, 901);
        const double truth = std::sqrt(2.0 / std::numbers::pi);
        const bool width_ok = std::abs(w.estimate - truth) <= 3.0 * w.standard_error;

        const double dudley = dudley_integral(CoveringProfile::unit_ball(4.0), 2.0);
        Rng rng(902);
        Matrix ball(4, 20000);
        for (Index j = 0; j < ball.cols(); ++j) {
            Vector g(4);
            for (Index i = 0; i < 4; ++i) g(i) = rng.normal();
            ball.col(j) = g.normalized() * std::pow(rng.uniform(), 0.25);
        }
        const WidthEstimate bw = gaussian_width_mc(PointSet(ball), 2000, 903);
        const bool dudley_ok = dudley <= 2.897 && dudley >= (bw.estimate - 3.0 * bw.standard_error) / 3.0;
        return Outcome{width_ok && dudley_ok, fmt("width %.4f +- %.4f, dudley %.4f", w.estimate, w.standard_error,
                                                  dudley) +
                                                  fmt(", ball width %.4f", bw.estimate)};
    });

    return failures == 0 ? 0 : 1;
}

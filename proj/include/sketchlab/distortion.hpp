#pragma once

#include "sketchlab/core.hpp"
#include "sketchlab/sets.hpp"
#include "sketchlab/sketch.hpp"
#include "sketchlab/subspaces.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sketchlab {

// Suprema over finite point sets. All exact for the set they are given.

/// max_x | |Phi x|^2 - |x|^2 |
double kappa(const Sketch& sketch, const PointSet& points);
/// max over nonzero x of | |Phi x|^2 / |x|^2 - 1 |
double delta_exact(const Sketch& sketch, const PointSet& points);
/// Multiplicative precision: max over distinct pairs of | |Phi(x-y)|^2 / |x-y|^2 - 1 |.
double epsilon_mc(const Sketch& sketch, const PointSet& points);
/// Additive precision: max over pairs of | |Phi(x-y)|^2 - |x-y|^2 |.
double zeta_mc(const Sketch& sketch, const PointSet& points);
/// Unsquared multiplicative precision: max over pairs of | |Phi(x-y)| / |x-y| - 1 |.
double epsilon_unsquared(const Sketch& sketch, const PointSet& points);

/// kappa over `samples` points drawn from the set (cones are normalized first).
/// A lower bound on the true supremum; deterministic given the seed.
double kappa_mc(const Sketch& sketch, const StructuredSet& set, Index samples, std::uint64_t seed);

/// Restricted isometry constant delta_s by enumerating all supports.
/// Guarded at C(n, s) <= 1e5.
double exact_sparse_rip(const Sketch& sketch, Index s);

/// max_i |B_i^T Phi^T Phi B_i - I|, the exact delta on a finite union of subspaces.
double exact_subspace_rip(const Sketch& sketch, const std::vector<Subspace>& subspaces);

/// Squared-form budget 2 e - e^2 that guarantees the unsquared precision e.
double eps_no_squares(double eps_hat);

/// |L(Phi curve) / L(curve) - 1| with polyline refinement until the ratio
/// changes by less than 1e-6 (relative).
double curve_length_distortion(const Sketch& sketch, const ManifoldSpec& spec, std::span<const double> grid);

struct WilsonInterval {
    double lower = 0.0;
    double upper = 1.0;
};

/// 95% Wilson score interval for failures out of trials.
WilsonInterval wilson_interval(Index failures, Index trials);

struct FailureRate {
    Index trials = 0;
    Index failures = 0;
    double rate = 0.0;
    WilsonInterval interval;
    std::vector<double> measurements;  ///< per trial, in trial order
};

/// Fraction of trials whose measured distortion exceeds `target`. Trial i
/// is measured with seed + i; results do not depend on `jobs`.
FailureRate failure_rate(const std::function<double(std::uint64_t)>& measure, double target, Index trials,
                         std::uint64_t seed, Index jobs = 1);

double median(std::vector<double> values);

enum class ReportMode { exact, monte_carlo };

struct DistortionReport {
    std::string set_id;
    std::string family;
    Index m = 0;
    Index n = 0;
    ReportMode mode = ReportMode::exact;
    Index samples = 0;
    std::optional<double> kappa;
    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<double> zeta;
    std::uint64_t seed = 0;
};

/// Exact kappa, delta, epsilon and zeta of a finite point set.
DistortionReport measure_finite(const Sketch& sketch, const PointSet& points);

/// Best available report for a structured set: exact where enumeration is
/// feasible (finite sets, small sparse sets, unions), Monte Carlo otherwise.
DistortionReport measure_set(const Sketch& sketch, const StructuredSet& set, Index samples, std::uint64_t seed);

void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const DistortionReport& r);

// Chord geometry on manifolds.

/// Normalized chord (y - x) / |y - x|.
Vector chord_map(const Vector& x, const Vector& y);

struct LongChordReport {
    Index checked = 0;
    Index violations = 0;
    double worst_ratio = 0.0;  ///< largest lhs / rhs seen
};

/// Random quadruples with |x1 - x2| >= t checking
/// |Ch(x1,x2) - Ch(y1,y2)| <= 2/t (|x1-y1| + |x2-y2|).
LongChordReport check_long_chords(Index quadruples, Index n, std::uint64_t seed);

struct ShortChordReport {
    Index checked = 0;
    Index iota_violations = 0;
    Index finsler_violations = 0;
    double iota_lower_bound = 0.0;     ///< max |Ch - P_x1 Ch| / |x1 - x2|
    double worst_iota_ratio = 0.0;     ///< against the 2/tau bound
    double worst_finsler_ratio = 0.0;  ///< against 2 sqrt(2) tau^{-1/2} |x1 - x2|^{1/2}
};

/// Pairs of manifold points (half of them close together) checked against
/// iota <= 2 / reach and the Finsler-distance bound of a manifold with that reach.
ShortChordReport check_short_chords(const ManifoldSpec& spec, double reach, Index pairs, std::uint64_t seed);

/// Empirical lower bound on iota(M) from sampled pairs.
double iota_lower_bound(const ManifoldSpec& spec, Index pairs, std::uint64_t seed);

}  // namespace sketchlab

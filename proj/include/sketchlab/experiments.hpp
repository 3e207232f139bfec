#pragma once

#include "sketchlab/bounds.hpp"
#include "sketchlab/distortion.hpp"
#include "sketchlab/recovery.hpp"
#include "sketchlab/sets.hpp"
#include "sketchlab/sketch.hpp"

#include <cstdint>
#include <vector>

namespace sketchlab {

/// Inclusive grid start, start + step, ... <= stop.
std::vector<Index> linear_grid(Index start, Index stop, Index step);
/// Roughly geometric integer grid from lo to hi with `count` distinct points.
std::vector<Index> geometric_grid(Index lo, Index hi, Index count);
/// Parses "start:stop:step".
std::vector<Index> parse_grid(const std::string& text);

/// Precision epsilon of the sketches formed by the first m rows of one draw,
/// for every m in the ascending grid. Rows are shared across m.
std::vector<double> epsilon_by_rows(const PointSet& points, Family family, double q,
                                    const std::vector<Index>& m_grid, std::uint64_t seed);

/// Per-m median of epsilon_by_rows over trials with seeds seed, seed + 1, ...
std::vector<double> median_epsilon_curve(const PointSet& points, Family family, double q,
                                         const std::vector<Index>& m_grid, Index trials, std::uint64_t seed,
                                         Index jobs = 1);

/// Smallest grid m whose value is <= target, or 0 if none.
Index minimal_m(const std::vector<Index>& m_grid, const std::vector<double>& values, double target);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Finite-cloud benchmark: |P| Gaussian points in R^n, Gaussian sketches.
struct JLBenchmark {
    Index n = 512;
    Index points = 100;
    double eps = 0.25;
    double eta = 0.1;
    std::uint64_t data_seed = 2024;
    Family family = Family::gaussian;
    double q = 1.0;
};

PointSet benchmark_cloud(const JLBenchmark& b);
BoundModel jl_model(const JLBenchmark& b);
/// Calibration of C for jl_finite on the benchmark; max_m defaults to n.
CalibrationConfig jl_calibration(const JLBenchmark& b, Index trials, std::uint64_t seed, Index jobs = 1,
                                 Index max_m = 0);

/// Exact delta_s of one sketch draw of the given family on s-sparse vectors in R^n.
double sparse_rip_trial(Family family, double q, Index m, Index n, Index s, std::uint64_t seed);

struct RecoverySetup {
    Index n = 64;
    Index s = 3;
    Index m = 32;
    Family family = Family::gaussian;
    double q = 1.0;
    RecoveryOptions options;
    double success_tol = 1e-6;
};

/// Random s-sparse signal with Gaussian entries on a uniform support.
Vector sparse_signal(Index n, Index s, std::uint64_t seed);

struct RecoveryTrial {
    bool success = false;
    double relative_error = 0.0;
    RecoveryResult result;
};
RecoveryTrial recovery_trial(const RecoverySetup& setup, std::uint64_t seed);

struct PhasePoint {
    Index m = 0;
    Index successes = 0;
    Index trials = 0;
    WilsonInterval interval;
    double median_error = 0.0;
};
PhasePoint recovery_phase_point(const RecoverySetup& setup, Index trials, std::uint64_t seed, Index jobs = 1);

/// Evenly spaced parameters covering the curve, both ends included.
std::vector<double> curve_grid(const ManifoldSpec& spec, Index points);

/// Length distortion of the circle (or other curve) under one sketch draw.
double curve_trial(const ManifoldSpec& spec, Family family, double q, Index m, std::uint64_t seed,
                   Index grid_points = 64);

/// Covering profile of a closed curve's tangent lines in the Finsler metric.
CoveringProfile circle_tangent_profile();

}  // namespace sketchlab

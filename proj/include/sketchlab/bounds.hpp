#pragma once

#include "sketchlab/complexity.hpp"
#include "sketchlab/distortion.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sketchlab {

/// Target-dimension formulas m >= C alpha^2 err^{-2} prefactor max{complexity, tail}.
enum class BoundVariant {
    jl_finite,
    master,
    rip_gamma2,
    eps_gamma2,
    zeta_gamma2,
    cov_dim,
    subspace_union_finite,
    sparse,
    cosparse,
    matrix,
    tensor,
    uos_rip,
    uos_embed,
    manifold_curves,
    manifold_additive,
    manifold_linearization,
    manifold_iota,
    manifold_reach,
    manifold_volume,
};

std::string variant_name(BoundVariant v);
BoundVariant parse_variant(const std::string& name);
std::vector<BoundVariant> all_variants();
/// Names of the scalar parameters the variant needs (gamma2 may instead come from a profile).
std::vector<std::string> required_parameters(BoundVariant v);

/// A gamma2-type complexity given as a covering profile; its Dudley upper bound is used.
struct Gamma2Profile {
    CoveringProfile profile;
    double diameter = 1.0;
    std::optional<double> cardinality;
};

struct BoundModel {
    BoundVariant variant = BoundVariant::jl_finite;
    std::map<std::string, double> params;
    std::vector<double> tensor_dims;   ///< n_1..n_d (tensor)
    std::vector<double> tensor_ranks;  ///< r_1..r_d (tensor)
    std::optional<Gamma2Profile> gamma2_profile;

    BoundModel& set(const std::string& key, double value) {
        params[key] = value;
        return *this;
    }
};

struct BoundResult {
    Index m = 1;
    std::string dominated_term;  ///< "complexity" or "tail"
    double complexity_term = 0.0;
    double tail_term = 0.0;
    double error = 0.0;      ///< eps, delta, zeta or kappa as used
    double prefactor = 1.0;  ///< Delta^2, Delta^4 or 1
    double value = 0.0;      ///< the real number under the ceiling
    std::optional<double> gamma2;
    std::string gamma2_source;  ///< "supplied", "dudley" or empty
    double C = 1.0;
    double alpha = 1.0;
    BoundVariant variant = BoundVariant::jl_finite;
    std::map<std::string, double> inputs;
};

/// Evaluates the variant's displayed bound with natural logarithms and
/// log_+ = max(log, 0). Throws MissingParameter or InvalidArgument.
BoundResult target_dimension(const BoundModel& model, double C = 1.0, double alpha = 1.0);

/// Volume of the unit ball in R^K.
double ball_volume(double K);

struct CalibrationConfig {
    BoundModel model;
    double alpha = 1.0;
    /// Distortion of one sketch draw with m rows under the given trial seed.
    std::function<double(Index m, std::uint64_t seed)> measure;
    double target = 0.0;  ///< failure when measured distortion exceeds this
    double eta = 0.1;     ///< allowed failure rate
    Index trials = 100;
    std::uint64_t seed = 0;
    Index max_m = 0;  ///< largest admissible m (usually n)
    int max_k = 8;    ///< grid {2^k / 4 : 0 <= k <= max_k}
    Index jobs = 1;
};

struct CalibrationStep {
    double C = 0.0;
    Index m = 0;
    FailureRate rate;
};

struct CalibrationResult {
    std::optional<double> C;  ///< empty when no grid point succeeded within max_m
    Index m = 0;
    double grid_factor = 2.0;
    std::vector<CalibrationStep> steps;
};

/// Smallest grid value of C whose target dimension has failure rate <= eta.
/// Trial seeds are shared across grid points.
CalibrationResult calibrate_C(const CalibrationConfig& config);

}  // namespace sketchlab

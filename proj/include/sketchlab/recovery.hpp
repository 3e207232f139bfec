#pragma once

#include "sketchlab/sets.hpp"
#include "sketchlab/sketch.hpp"
#include "sketchlab/subspaces.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sketchlab {

/// Best s-sparse approximation; ties go to the lower index.
Vector hard_threshold(const Vector& x, Index s);

/// P_theta x for the subspace capturing the most energy of x; ties go to the first.
Vector project_uos(const Vector& x, const std::vector<Subspace>& family);

using Projection = std::function<Vector(const Vector&)>;
/// Restriction of a gradient g to the model subspace selected by the iterate x
/// (by g itself when x = 0).
using Restriction = std::function<Vector(const Vector& x, const Vector& g)>;

/// Model projection for a sparse set or a finite union of subspaces.
Projection model_projection(const StructuredSet& model);
Restriction model_restriction(const StructuredSet& model);

struct RecoveryProblem {
    Sketch sketch;
    Vector y;
    StructuredSet model;
    double noise_level = 0.0;
};

/// fixed: step mu. normalized: step mu |g_S|^2 / |Phi g_S|^2 with g_S the
/// gradient restricted to the current model subspace.
enum class StepRule { fixed, normalized };
std::string step_rule_name(StepRule r);
StepRule parse_step_rule(const std::string& name);

enum class RecoveryStatus { converged, max_iters, diverged };
std::string status_name(RecoveryStatus s);

struct RecoveryOptions {
    double mu = 1.0;
    StepRule step = StepRule::fixed;
    Index max_iters = 100;
    double tol = 1e-10;
    bool record_iterates = false;
    /// Precision of the sketch on U - U, when known; used for the bilipschitz check.
    std::optional<double> eps_estimate;
};

struct RecoveryResult {
    Vector estimate;
    Index iterations = 0;
    std::vector<double> residuals;  ///< |y - Phi x_k| for k = 0..iterations
    std::vector<Vector> iterates;   ///< x_1.. when recorded
    RecoveryStatus status = RecoveryStatus::max_iters;
    std::optional<std::string> warning;
};

/// Projective Landweber iteration x_{k+1} = Project(x_k + mu Phi^T (y - Phi x_k)) from x_0 = 0.
RecoveryResult landweber_recover(const Sketch& sketch, const Vector& y, const Projection& project,
                                 const RecoveryOptions& options = {}, const Restriction& restrict = {});
RecoveryResult landweber_recover(const RecoveryProblem& problem, const RecoveryOptions& options = {});

/// Iterative hard thresholding: the Landweber iteration with the s-sparse projection.
RecoveryResult iht(const Sketch& sketch, const Vector& y, Index s, const RecoveryOptions& options = {});

/// |x - x_hat| / |x| (absolute error when x = 0).
double relative_error(const Vector& x, const Vector& x_hat);

}  // namespace sketchlab

#include "sketchlab/recovery.hpp"

#include "sketchlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sketchlab {

Vector hard_threshold(const Vector& x, Index s) {
    const Index n = x.size();
    if (s < 1 || s > n) throw InvalidArgument("hard_threshold needs 1 <= s <= n");
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(x(a)) > std::abs(x(b)); });
    Vector out = Vector::Zero(n);
    for (Index k = 0; k < s; ++k) out(order[static_cast<std::size_t>(k)]) = x(order[static_cast<std::size_t>(k)]);
    return out;
}

Vector project_uos(const Vector& x, const std::vector<Subspace>& family) {
    if (family.empty()) throw EmptySetError("empty subspace family");
    std::size_t best = 0;
    double best_energy = -1.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (family[i].ambient_dim() != x.size()) throw DimensionMismatch("subspace and vector dimensions differ");
        const double e = (family[i].basis().transpose() * x).squaredNorm();
        if (e > best_energy) {
            best_energy = e;
            best = i;
        }
    }
    const Matrix& b = family[best].basis();
    return b * (b.transpose() * x);
}

Projection model_projection(const StructuredSet& model) {
    if (const auto* sp = std::get_if<SparseSet>(&model.value())) {
        const Index s = sp->s;
        return [s](const Vector& v) { return hard_threshold(v, s); };
    }
    if (const auto* u = std::get_if<UnionSet>(&model.value())) {
        auto family = u->subspaces;
        return [family = std::move(family)](const Vector& v) { return project_uos(v, family); };
    }
    throw InvalidArgument("model '" + model.kind() + "' has no projection; discretize it into a finite union");
}

Restriction model_restriction(const StructuredSet& model) {
    if (std::holds_alternative<SparseSet>(model.value())) {
        const Index s = std::get<SparseSet>(model.value()).s;
        return [s](const Vector& x, const Vector& g) {
            const Vector pick = x.isZero(0.0) ? hard_threshold(g, s) : x;
            Vector out = Vector::Zero(g.size());
            for (Index i = 0; i < g.size(); ++i)
                if (pick(i) != 0.0) out(i) = g(i);
            return out;
        };
    }
    if (const auto* u = std::get_if<UnionSet>(&model.value())) {
        auto family = u->subspaces;
        return [family = std::move(family)](const Vector& x, const Vector& g) {
            const Vector& key = x.isZero(0.0) ? g : x;
            std::size_t best = 0;
            double energy = -1.0;
            for (std::size_t i = 0; i < family.size(); ++i) {
                const double e = (family[i].basis().transpose() * key).squaredNorm();
                if (e > energy) {
                    energy = e;
                    best = i;
                }
            }
            const Matrix& b = family[best].basis();
            return Vector(b * (b.transpose() * g));
        };
    }
    throw InvalidArgument("model '" + model.kind() + "' has no projection; discretize it into a finite union");
}

std::string step_rule_name(StepRule r) { return r == StepRule::fixed ? "fixed" : "normalized"; }

StepRule parse_step_rule(const std::string& name) {
    if (name == "fixed") return StepRule::fixed;
    if (name == "normalized") return StepRule::normalized;
    throw InvalidArgument("step rule must be fixed or normalized");
}

std::string status_name(RecoveryStatus s) {
    switch (s) {
        case RecoveryStatus::converged: return "converged";
        case RecoveryStatus::max_iters: return "max_iters";
        case RecoveryStatus::diverged: return "diverged";
    }
    return "unknown";
}

RecoveryResult landweber_recover(const Sketch& sketch, const Vector& y, const Projection& project,
                                 const RecoveryOptions& options, const Restriction& restrict) {
    if (options.step == StepRule::normalized && !restrict)
        throw InvalidArgument("the normalized step needs a model restriction");
    if (!(options.mu > 0.0)) throw InvalidArgument("step size must be positive");
    if (options.max_iters < 0) throw InvalidArgument("max_iters must be nonnegative");
    if (y.size() != sketch.rows()) throw DimensionMismatch("measurement length differs from the sketch rows");
    const Matrix& phi = sketch.matrix();

    RecoveryResult res;
    if (options.eps_estimate) {
        const double e = *options.eps_estimate;
        if (!(e < 1.0) || (1.0 + e) / (1.0 - e) >= 1.5)
            res.warning = "bilipschitz condition (1+eps)/(1-eps) < 3/2 violated for eps = " + std::to_string(e);
    }
    Vector x = Vector::Zero(sketch.cols());
    double residual = y.norm();
    double best = residual;
    res.residuals.push_back(residual);
    res.status = RecoveryStatus::max_iters;
    if (residual <= options.tol) {
        res.status = RecoveryStatus::converged;
    } else {
        for (Index k = 0; k < options.max_iters; ++k) {
            const Vector g = phi.transpose() * (y - phi * x);
            double mu = options.mu;
            if (options.step == StepRule::normalized) {
                const Vector gs = restrict(x, g);
                const double denom = (phi * gs).squaredNorm();
                if (denom > 0.0) mu *= gs.squaredNorm() / denom;
            }
            x = project(x + mu * g);
            residual = (y - phi * x).norm();
            res.residuals.push_back(residual);
            if (options.record_iterates) res.iterates.push_back(x);
            res.iterations = k + 1;
            best = std::min(best, residual);
            if (residual <= options.tol) {
                res.status = RecoveryStatus::converged;
                break;
            }
            if (!std::isfinite(residual) || residual > 10.0 * best) {
                res.status = RecoveryStatus::diverged;
                break;
            }
        }
    }
    res.estimate = std::move(x);
    return res;
}

RecoveryResult landweber_recover(const RecoveryProblem& problem, const RecoveryOptions& options) {
    if (problem.model.ambient_dim() != problem.sketch.cols())
        throw DimensionMismatch("model and sketch dimensions differ");
    return landweber_recover(problem.sketch, problem.y, model_projection(problem.model), options,
                             model_restriction(problem.model));
}

RecoveryResult iht(const Sketch& sketch, const Vector& y, Index s, const RecoveryOptions& options) {
    const StructuredSet model = StructuredSet::sparse(sketch.cols(), s);
    return landweber_recover(sketch, y, model_projection(model), options, model_restriction(model));
}

double relative_error(const Vector& x, const Vector& x_hat) {
    if (x.size() != x_hat.size()) throw DimensionMismatch("vectors differ in length");
    const double nx = x.norm();
    const double d = (x - x_hat).norm();
    return nx > 0.0 ? d / nx : d;
}

}  // namespace sketchlab

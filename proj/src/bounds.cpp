#include "sketchlab/bounds.hpp"

#include "sketchlab/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

namespace sketchlab {

namespace {

struct VariantInfo {
    BoundVariant variant;
    const char* name;
    const char* error_key;
    std::vector<std::string> params;
};

const std::vector<VariantInfo>& variant_table() {
    static const std::vector<VariantInfo> table = {
        {BoundVariant::jl_finite, "jl_finite", "eps", {"points", "eps", "eta"}},
        {BoundVariant::master, "master", "kappa", {"kappa", "diameter", "gamma2", "eta"}},
        {BoundVariant::rip_gamma2, "rip_gamma2", "delta", {"delta", "gamma2", "eta"}},
        {BoundVariant::eps_gamma2, "eps_gamma2", "eps", {"eps", "gamma2", "eta"}},
        {BoundVariant::zeta_gamma2, "zeta_gamma2", "zeta", {"zeta", "diameter", "gamma2", "eta"}},
        {BoundVariant::cov_dim, "cov_dim", "delta", {"delta", "k", "N0", "K", "c", "eta"}},
        {BoundVariant::subspace_union_finite, "subspace_union_finite", "delta", {"delta", "k", "K", "eta"}},
        {BoundVariant::sparse, "sparse", "delta", {"delta", "n", "s", "eta"}},
        {BoundVariant::cosparse, "cosparse", "delta", {"delta", "n", "p", "l", "eta"}},
        {BoundVariant::matrix, "matrix", "delta", {"delta", "n1", "n2", "r", "eta"}},
        {BoundVariant::tensor, "tensor", "delta", {"delta", "eta"}},
        {BoundVariant::uos_rip, "uos_rip", "delta", {"delta", "K", "gamma2", "eta"}},
        {BoundVariant::uos_embed, "uos_embed", "eps", {"eps", "K", "gamma2", "eta"}},
        {BoundVariant::manifold_curves, "manifold_curves", "eps", {"eps", "K", "gamma2", "eta"}},
        {BoundVariant::manifold_additive, "manifold_additive", "zeta", {"zeta", "diameter", "doubling", "eta"}},
        {BoundVariant::manifold_linearization, "manifold_linearization", "eps", {"eps", "k", "K", "eta"}},
        {BoundVariant::manifold_iota, "manifold_iota", "eps", {"eps", "K2", "iota", "diameter", "K_fin", "K", "eta"}},
        {BoundVariant::manifold_reach, "manifold_reach", "eps", {"eps", "K2", "tau", "diameter", "K", "eta"}},
        {BoundVariant::manifold_volume, "manifold_volume", "eps", {"eps", "K", "tau", "volume", "eta"}},
    };
    return table;
}

const VariantInfo& info(BoundVariant v) {
    for (const auto& i : variant_table())
        if (i.variant == v) return i;
    throw InvalidArgument("unknown bound variant");
}

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

class Params {
public:
    Params(const BoundModel& model, BoundResult& result) : model_(model), result_(result) {}

    double get(const std::string& key) const {
        const auto it = model_.params.find(key);
        if (it == model_.params.end())
            throw MissingParameter(variant_name(model_.variant) + " needs parameter '" + key + "'");
        if (!std::isfinite(it->second)) throw InvalidArgument("parameter '" + key + "' must be finite");
        result_.inputs[key] = it->second;
        return it->second;
    }
    double positive(const std::string& key) const {
        const double v = get(key);
        if (!(v > 0.0)) throw InvalidArgument("parameter '" + key + "' must be positive");
        return v;
    }
    double nonnegative(const std::string& key) const {
        const double v = get(key);
        if (!(v >= 0.0)) throw InvalidArgument("parameter '" + key + "' must be nonnegative");
        return v;
    }
    double at_least_one(const std::string& key) const {
        const double v = get(key);
        if (!(v >= 1.0)) throw InvalidArgument("parameter '" + key + "' must be at least 1");
        return v;
    }
    double probability(const std::string& key) const {
        const double v = get(key);
        if (!(v > 0.0 && v < 1.0)) throw InvalidArgument("parameter '" + key + "' must lie in (0, 1)");
        return v;
    }
    double gamma2() const {
        if (model_.params.count("gamma2")) {
            const double g = nonnegative("gamma2");
            result_.gamma2 = g;
            result_.gamma2_source = "supplied";
            return g;
        }
        if (model_.gamma2_profile) {
            const auto& p = *model_.gamma2_profile;
            const double g = gamma2_upper(p.profile, p.diameter, p.cardinality);
            result_.gamma2 = g;
            result_.gamma2_source = "dudley";
            result_.inputs["gamma2"] = g;
            return g;
        }
        throw MissingParameter(variant_name(model_.variant) + " needs 'gamma2' or a covering profile");
    }

private:
    const BoundModel& model_;
    BoundResult& result_;
};

Index ceil_guarded(double value) {
    const double r = std::round(value);
    if (std::abs(value - r) <= 1e-9 * std::max(1.0, std::abs(value))) return static_cast<Index>(r);
    return static_cast<Index>(std::ceil(value));
}

}  // namespace

std::string variant_name(BoundVariant v) { return info(v).name; }

BoundVariant parse_variant(const std::string& name) {
    for (const auto& i : variant_table())
        if (name == i.name) return i.variant;
    throw InvalidArgument("unknown bound model '" + name + "'");
}

std::vector<BoundVariant> all_variants() {
    std::vector<BoundVariant> out;
    for (const auto& i : variant_table()) out.push_back(i.variant);
    return out;
}

std::vector<std::string> required_parameters(BoundVariant v) { return info(v).params; }

BoundResult target_dimension(const BoundModel& model, double C, double alpha) {
    if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("C must be positive");
    if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be at least 1");
    BoundResult res;
    res.variant = model.variant;
    res.C = C;
    res.alpha = alpha;
    const Params p(model, res);

    const double tail = std::log(1.0 / p.probability("eta"));
    double err = 0.0;
    double prefactor = 1.0;
    double complexity = 0.0;
    double tail_term = tail;

    switch (model.variant) {
        case BoundVariant::jl_finite:
            err = p.probability("eps");
            complexity = std::log(p.at_least_one("points"));
            break;
        case BoundVariant::master: {
            err = p.positive("kappa");
            const double d = p.positive("diameter");
            const double g = p.gamma2();
            prefactor = d * d;
            complexity = g * g;
            tail_term = d * d * tail;
            break;
        }
        case BoundVariant::rip_gamma2:
        case BoundVariant::eps_gamma2: {
            err = p.probability(info(model.variant).error_key);
            const double g = p.gamma2();
            complexity = g * g;
            break;
        }
        case BoundVariant::zeta_gamma2: {
            err = p.probability("zeta");
            const double d = p.positive("diameter");
            const double g = p.gamma2();
            prefactor = d * d;
            complexity = g * g;
            tail_term = d * d * tail;
            break;
        }
        case BoundVariant::cov_dim:
            err = p.probability("delta");
            complexity = std::log(p.at_least_one("k")) + std::log(p.at_least_one("N0")) +
                         p.nonnegative("K") * std::log(p.at_least_one("c"));
            break;
        case BoundVariant::subspace_union_finite:
            err = p.probability("delta");
            complexity = std::log(p.at_least_one("k")) + p.nonnegative("K");
            break;
        case BoundVariant::sparse: {
            err = p.probability("delta");
            const double n = p.at_least_one("n");
            const double s = p.at_least_one("s");
            if (s > n) throw InvalidArgument("sparsity s must not exceed n");
            complexity = s * std::log(std::numbers::e * n / s);
            break;
        }
        case BoundVariant::cosparse: {
            err = p.probability("delta");
            const double n = p.at_least_one("n");
            const double pp = p.at_least_one("p");
            const double l = p.nonnegative("l");
            if (l > n || l > pp) throw InvalidArgument("cosparsity l must not exceed n or p");
            complexity = (l > 0.0 ? l * std::log(std::numbers::e * pp / l) : 0.0) + (n - l);
            break;
        }
        case BoundVariant::matrix:
            err = p.probability("delta");
            complexity = p.at_least_one("r") * (p.at_least_one("n1") + p.at_least_one("n2") + 1.0);
            break;
        case BoundVariant::tensor: {
            err = p.probability("delta");
            if (model.tensor_dims.empty() || model.tensor_dims.size() != model.tensor_ranks.size())
                throw MissingParameter("tensor needs matching lists of mode sizes and ranks");
            double prod = 1.0;
            double sum = 0.0;
            for (std::size_t i = 0; i < model.tensor_dims.size(); ++i) {
                const double ni = model.tensor_dims[i];
                const double ri = model.tensor_ranks[i];
                if (!(ni >= 1.0) || !(ri >= 1.0)) throw InvalidArgument("tensor sizes and ranks must be >= 1");
                prod *= ri;
                sum += ni * ri;
            }
            res.inputs["order"] = static_cast<double>(model.tensor_dims.size());
            complexity = (prod + sum) * std::log(static_cast<double>(model.tensor_dims.size()));
            break;
        }
        case BoundVariant::uos_rip:
        case BoundVariant::uos_embed: {
            err = p.probability(info(model.variant).error_key);
            const double g = p.gamma2();
            complexity = p.nonnegative("K") + g * g;
            break;
        }
        case BoundVariant::manifold_curves: {
            err = eps_no_squares(p.probability("eps"));
            const double g = p.gamma2();
            complexity = p.nonnegative("K") + g * g;
            break;
        }
        case BoundVariant::manifold_additive: {
            err = p.probability("zeta");
            const double d = p.positive("diameter");
            prefactor = d * d * d * d;
            complexity = p.nonnegative("doubling");
            break;
        }
        case BoundVariant::manifold_linearization:
            err = p.probability("eps");
            complexity = std::log(p.at_least_one("k")) + p.nonnegative("K");
            break;
        case BoundVariant::manifold_iota:
            err = p.probability("eps");
            complexity = p.nonnegative("K2") * log_plus(p.positive("iota") * p.positive("diameter")) +
                         p.nonnegative("K_fin") + p.nonnegative("K");
            break;
        case BoundVariant::manifold_reach:
            err = p.probability("eps");
            complexity = p.nonnegative("K2") * log_plus(p.positive("diameter") / p.positive("tau")) +
                         p.nonnegative("K");
            break;
        case BoundVariant::manifold_volume: {
            err = p.probability("eps");
            const double K = p.nonnegative("K");
            complexity = K * log_plus(K / p.positive("tau")) + K + log_plus(p.positive("volume"));
            break;
        }
    }

    res.error = err;
    res.prefactor = prefactor;
    res.complexity_term = complexity;
    res.tail_term = tail_term;
    res.dominated_term = complexity >= tail_term ? "complexity" : "tail";
    res.value = C * alpha * alpha / (err * err) * prefactor * std::max(complexity, tail_term);
    if (!std::isfinite(res.value)) throw InvalidArgument("bound evaluates to a non-finite value");
    res.m = std::max<Index>(1, ceil_guarded(res.value));
    return res;
}

double ball_volume(double K) {
    if (!(K >= 1.0)) throw InvalidArgument("ball dimension must be at least 1");
    return std::exp(0.5 * K * std::log(std::numbers::pi) - std::lgamma(0.5 * K + 1.0));
}

CalibrationResult calibrate_C(const CalibrationConfig& config) {
    if (!config.measure) throw InvalidArgument("calibration needs a measurement");
    if (config.max_m < 1) throw InvalidArgument("calibration needs max_m >= 1");
    if (!(config.eta > 0.0 && config.eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
    CalibrationResult out;
    std::map<Index, FailureRate> cache;
    for (int k = 0; k <= config.max_k; ++k) {
        const double C = std::ldexp(1.0, k) / 4.0;
        const Index m = target_dimension(config.model, C, config.alpha).m;
        if (m > config.max_m) break;
        auto it = cache.find(m);
        if (it == cache.end()) {
            auto rate = failure_rate([&](std::uint64_t s) { return config.measure(m, s); }, config.target,
                                     config.trials, config.seed, config.jobs);
            it = cache.emplace(m, std::move(rate)).first;
        }
        out.steps.push_back({C, m, it->second});
        if (it->second.rate <= config.eta) {
            out.C = C;
            out.m = m;
            break;
        }
    }
    return out;
}

}  // namespace sketchlab

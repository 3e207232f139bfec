#include "cli.hpp"

#include "sketchlab/bounds.hpp"
#include "sketchlab/complexity.hpp"
#include "sketchlab/csv.hpp"
#include "sketchlab/distortion.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/experiments.hpp"
#include "sketchlab/parallel.hpp"
#include "sketchlab/random.hpp"
#include "sketchlab/recovery.hpp"
#include "sketchlab/sets.hpp"
#include "sketchlab/sketch.hpp"
#include "sketchlab/subspaces.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace sketchlab::cli {

namespace {

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

const std::vector<std::string> kCommands = {"bound", "distort", "phase", "width", "recover", "calibrate", "props"};

// Options shared by every command.
struct Common {
    std::optional<std::uint64_t> seed;
    Index jobs = 1;
    std::string output;
    double C = 1.0;
    std::optional<double> alpha;
    std::string family = "gaussian";
    bool family_given = false;
};

struct SetOptions {
    std::string kind = "sparse";
    Index n = 0;
    Index s = 0;
    Index p = 0;
    Index l = 0;
    Index n1 = 0;
    Index n2 = 0;
    Index r = 0;
    std::vector<Index> dims;
    std::vector<Index> ranks;
    std::string shape = "circle";
    double radius = 1.0;
    double a = 1.0;
    double b = 1.0;
    Index ambient = 2;
    std::string points_file;
    Index cloud = 0;
    Index count = 16;
};

struct ProfileOptions {
    std::optional<double> dim;
    double c = 1.0;
    double base = 1.0;
    double diameter = 1.0;
};

std::uint64_t data_seed(std::uint64_t seed) { return mix64(seed + 1); }

std::uint64_t require_seed(const Common& c) {
    if (c.seed) return *c.seed;
    if (const char* env = std::getenv("SKETCHLAB_SEED"); env && *env) {
        try {
            return static_cast<std::uint64_t>(csv::parse_integer(env));
        } catch (const FormatError&) {
            throw ConfigError(std::string("SKETCHLAB_SEED is not an integer: ") + env);
        }
    }
    throw ConfigError("a seed is required: pass --seed or set SKETCHLAB_SEED");
}

std::optional<std::uint64_t> optional_seed(const Common& c) {
    if (c.seed) return c.seed;
    if (const char* env = std::getenv("SKETCHLAB_SEED"); env && *env) return require_seed(c);
    return std::nullopt;
}

SketchSpec family_spec(const Common& c) { return parse_family(c.family); }

double effective_alpha(const Common& c) {
    if (c.alpha) return *c.alpha;
    if (c.family_given) {
        const auto spec = family_spec(c);
        return family_alpha(spec.family, spec.q);
    }
    return 1.0;
}

double sketch_alpha(const Common& c) {
    if (c.alpha) return *c.alpha;
    const auto spec = family_spec(c);
    return family_alpha(spec.family, spec.q);
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Random seed (falls back to SKETCHLAB_SEED)");
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("-o,--output", c.output, "Output CSV path (default stdout)");
    sub->add_option("--C", c.C, "Universal constant C")->check(CLI::PositiveNumber);
    sub->add_option("--alpha", c.alpha, "Subgaussian parameter alpha");
    sub->add_option("--family", c.family, "gaussian, rademacher, achlioptas[:q]")
        ->each([&c](const std::string&) { c.family_given = true; });
    sub->add_option("--config", "JSON document mirroring the flags");
}

void add_set_options(CLI::App* sub, SetOptions& s) {
    sub->add_option("--set", s.kind, "finite, sparse, cosparse, lowrank, tucker, uos, manifold");
    sub->add_option("--n", s.n, "Ambient dimension");
    sub->add_option("--s", s.s, "Sparsity");
    sub->add_option("--p", s.p, "Rows of a Gaussian analysis operator (cosparse; default finite differences)");
    sub->add_option("--l", s.l, "Cosparsity");
    sub->add_option("--n1", s.n1);
    sub->add_option("--n2", s.n2);
    sub->add_option("--r", s.r, "Rank");
    sub->add_option("--dims", s.dims, "Tensor mode sizes")->delimiter(',');
    sub->add_option("--ranks", s.ranks, "Tucker ranks")->delimiter(',');
    sub->add_option("--shape", s.shape, "circle, sphere2, helix");
    sub->add_option("--radius", s.radius);
    sub->add_option("--a", s.a, "Helix radius");
    sub->add_option("--b", s.b, "Helix pitch");
    sub->add_option("--ambient", s.ambient, "Ambient dimension of a manifold");
    sub->add_option("--points-file", s.points_file, "Finite set as CSV, one point per row");
    sub->add_option("--cloud", s.cloud, "Finite set of this many Gaussian points in R^n");
    sub->add_option("--count", s.count, "Subspaces in the discretized rotating-plane union");
}

void add_profile_options(CLI::App* sub, ProfileOptions& p) {
    sub->add_option("--profile-dim", p.dim, "Covering dimension K of N(u D) <= base (c/u)^K");
    sub->add_option("--profile-c", p.c);
    sub->add_option("--profile-base", p.base);
    sub->add_option("--profile-diameter", p.diameter);
}

StructuredSet build_set(const SetOptions& o, std::uint64_t seed) {
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    if (o.kind == "finite") {
        if (!o.points_file.empty()) {
            std::ifstream in(o.points_file);
            if (!in) throw ConfigError("cannot open " + o.points_file);
            return StructuredSet::finite(read_pointset_csv(in));
        }
        need(o.cloud >= 1 && o.n >= 1, "finite set needs --points-file or --cloud with --n");
        return StructuredSet::finite(gaussian_cloud(o.cloud, o.n, data_seed(seed)));
    }
    if (o.kind == "sparse") {
        need(o.n >= 1 && o.s >= 1, "sparse set needs --n and --s");
        return StructuredSet::sparse(o.n, o.s);
    }
    if (o.kind == "cosparse") {
        need(o.n >= 2, "cosparse set needs --n >= 2");
        if (o.p > 0) {
            SketchSpec spec;
            spec.m = o.p;
            spec.n = o.n;
            spec.seed = data_seed(seed);
            return StructuredSet::cosparse(build_sketch(spec).matrix(), o.l);
        }
        return StructuredSet::cosparse(finite_difference_operator(o.n), o.l);
    }
    if (o.kind == "lowrank") {
        need(o.n1 >= 1 && o.n2 >= 1 && o.r >= 1, "lowrank set needs --n1, --n2 and --r");
        return StructuredSet::lowrank(o.n1, o.n2, o.r);
    }
    if (o.kind == "tucker") return StructuredSet::tucker(o.dims, o.ranks);
    if (o.kind == "uos") {
        need(o.n >= 3 && o.count >= 1, "uos set needs --n >= 3 and --count >= 1");
        return StructuredSet::union_of(rotating_plane_family(o.n).discretize(o.count));
    }
    if (o.kind == "manifold") {
        if (o.shape == "circle") return StructuredSet::manifold(ManifoldSpec::circle(o.radius, o.ambient));
        if (o.shape == "sphere2") return StructuredSet::manifold(ManifoldSpec::sphere2(o.radius, o.ambient));
        if (o.shape == "helix") return StructuredSet::manifold(ManifoldSpec::helix(o.a, o.b, o.ambient));
        throw ConfigError("unknown manifold shape '" + o.shape + "'");
    }
    throw ConfigError("unknown set kind '" + o.kind + "'");
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot write " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::string seed_cell(std::optional<std::uint64_t> seed) { return seed ? std::to_string(*seed) : std::string(); }

// ------------------------------------------------------------------ bound

std::vector<std::string> bound_parameter_names() {
    std::set<std::string> names;
    for (auto v : all_variants())
        for (const auto& p : required_parameters(v)) names.insert(p);
    return {names.begin(), names.end()};
}

struct BoundOptions {
    std::string model;
    std::map<std::string, std::optional<double>> values;
    std::vector<double> dims;
    std::vector<double> ranks;
    ProfileOptions profile;
    std::string batch;
};

BoundModel bound_model(const std::string& name, const std::map<std::string, double>& values,
                       std::vector<double> dims, std::vector<double> ranks, const ProfileOptions& profile) {
    BoundModel m;
    m.variant = parse_variant(name);
    m.params = values;
    m.tensor_dims = std::move(dims);
    m.tensor_ranks = std::move(ranks);
    if (profile.dim)
        m.gamma2_profile = Gamma2Profile{CoveringProfile::analytic(*profile.dim, profile.c, profile.base), profile.diameter, {}};
    return m;
}

void bound_header(std::ostream& out) {
    csv::row(out, "model", "m", "dominated_term", "complexity_term", "tail_term", "value", "gamma2", "gamma2_source",
             "C", "alpha", "seed");
}

void bound_row(std::ostream& out, const BoundResult& r, const std::string& seed) {
    csv::row(out, variant_name(r.variant), r.m, r.dominated_term, r.complexity_term, r.tail_term, r.value,
             r.gamma2 ? csv::format(*r.gamma2) : std::string(), r.gamma2_source, r.C, r.alpha, seed);
}

std::vector<double> parse_list(const std::string& cell) {
    std::vector<double> out;
    std::stringstream ss(cell);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(csv::parse_double(item));
    return out;
}

int run_bound(const BoundOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    const double alpha = effective_alpha(c);
    const std::string seed = seed_cell(optional_seed(c));
    if (!o.batch.empty()) {
        std::ifstream in(o.batch);
        if (!in) throw ConfigError("cannot open " + o.batch);
        std::string line;
        if (!csv::next_line(in, line)) throw ConfigError("batch file is empty");
        const auto header = csv::split_line(line);
        Output dst(c.output, out);
        bound_header(*dst);
        Index rows = 0;
        while (csv::next_line(in, line)) {
            const auto cells = csv::split_line(line);
            if (cells.size() != header.size()) throw FormatError("batch row has the wrong number of cells");
            std::string model = o.model;
            std::map<std::string, double> values;
            std::vector<double> dims, ranks;
            double C = c.C, a = alpha;
            for (std::size_t k = 0; k < header.size(); ++k) {
                if (cells[k].empty()) continue;
                if (header[k] == "model") model = cells[k];
                else if (header[k] == "dims") dims = parse_list(cells[k]);
                else if (header[k] == "ranks") ranks = parse_list(cells[k]);
                else if (header[k] == "C") C = csv::parse_double(cells[k]);
                else if (header[k] == "alpha") a = csv::parse_double(cells[k]);
                else values[header[k]] = csv::parse_double(cells[k]);
            }
            if (model.empty()) throw ConfigError("batch row lacks a model");
            bound_row(*dst, target_dimension(bound_model(model, values, dims, ranks, o.profile), C, a), seed);
            ++rows;
        }
        err << "bound: " << rows << " rows evaluated\n";
        return ok;
    }
    if (o.model.empty()) throw ConfigError("bound needs --model or --batch");
    std::map<std::string, double> values;
    for (const auto& [k, v] : o.values)
        if (v) values[k] = *v;
    const auto r = target_dimension(bound_model(o.model, values, o.dims, o.ranks, o.profile), c.C, alpha);
    out << "m=" << r.m << " dominated_term=" << r.dominated_term << " model=" << variant_name(r.variant)
        << " C=" << csv::format(r.C) << " alpha=" << csv::format(r.alpha);
    if (r.gamma2) out << " gamma2=" << csv::format(*r.gamma2) << " gamma2_source=" << r.gamma2_source;
    out << "\n";
    if (!c.output.empty()) {
        Output dst(c.output, out);
        bound_header(*dst);
        bound_row(*dst, r, seed);
    }
    err << "bound: m=" << r.m << " (" << r.dominated_term << " term)\n";
    return ok;
}

// ---------------------------------------------------------------- distort

struct DistortOptions {
    SetOptions set;
    Index m = 0;
    Index samples = 1000;
    Index trials = 1;
};

int run_distort(const DistortOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    const std::uint64_t seed = require_seed(c);
    if (o.m < 1) throw ConfigError("distort needs --m >= 1");
    if (o.trials < 1) throw ConfigError("trials must be >= 1");
    const StructuredSet set = build_set(o.set, seed);
    SketchSpec spec = family_spec(c);
    spec.m = o.m;
    spec.n = set.ambient_dim();
    const double alpha = sketch_alpha(c);
    Output dst(c.output, out);
    csv::row(*dst, "set_id", "family", "m", "n", "mode", "samples", "kappa", "delta", "epsilon", "zeta", "seed", "C",
             "alpha");
    double worst = 0.0;
    for (Index t = 0; t < o.trials; ++t) {
        spec.seed = seed + static_cast<std::uint64_t>(t);
        const Sketch sk(build_sketch(spec).matrix(), spec, alpha);
        DistortionReport r = measure_set(sk, set, o.samples, data_seed(seed));
        r.seed = spec.seed;
        std::ostringstream line;
        write_report_row(line, r);
        std::string text = line.str();
        text.pop_back();
        *dst << text << ',' << csv::format(c.C) << ',' << csv::format(alpha) << '\n';
        if (r.epsilon) worst = std::max(worst, *r.epsilon);
    }
    err << "distort: " << o.trials << " trial(s) on " << set.kind() << ", max epsilon " << csv::format(worst) << "\n";
    return ok;
}

// ------------------------------------------------------------------ phase

struct PhaseOptions {
    SetOptions set;
    std::string grid;
    Index trials = 20;
    Index samples = 200;
    double target = 0.25;
};

int run_phase(const PhaseOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    const std::uint64_t seed = require_seed(c);
    if (o.grid.empty()) throw ConfigError("phase needs --m-grid start:stop:step");
    if (o.trials < 1) throw ConfigError("trials must be >= 1");
    const auto grid = parse_grid(o.grid);
    const StructuredSet set = build_set(o.set, seed);
    const PointSet points = std::holds_alternative<FiniteSet>(set.value())
                                ? std::get<FiniteSet>(set.value()).points
                                : sample(set, o.samples, data_seed(seed));
    const SketchSpec fam = family_spec(c);
    const double alpha = sketch_alpha(c);
    const auto curves = parallel_map(static_cast<std::size_t>(o.trials), static_cast<std::size_t>(c.jobs), [&](std::size_t t) {
        return epsilon_by_rows(points, fam.family, fam.q, grid, seed + t);
    });
    Output dst(c.output, out);
    csv::row(*dst, "set_id", "family", "m", "n", "samples", "trials", "median_epsilon", "failure_rate", "wilson_lower",
             "wilson_upper", "target", "seed", "C", "alpha");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<double> column;
        Index failures = 0;
        for (const auto& curve : curves) {
            column.push_back(curve[k]);
            if (curve[k] > o.target) ++failures;
        }
        const auto ci = wilson_interval(failures, o.trials);
        csv::row(*dst, set.kind(), family_name(fam.family, fam.q), grid[k], points.dim(), points.size(), o.trials,
                 median(column), static_cast<double>(failures) / static_cast<double>(o.trials), ci.lower, ci.upper,
                 o.target, std::to_string(seed), c.C, alpha);
    }
    err << "phase: " << grid.size() << " grid points x " << o.trials << " trials on " << set.kind() << "\n";
    return ok;
}

// ------------------------------------------------------------------ width

struct WidthOptions {
    SetOptions set;
    Index samples = 1000;
    Index trials = 200;
    ProfileOptions profile;
};

int run_width(const WidthOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    const std::uint64_t seed = require_seed(c);
    const StructuredSet set = build_set(o.set, seed);
    const PointSet points = std::holds_alternative<FiniteSet>(set.value())
                                ? std::get<FiniteSet>(set.value()).points
                                : sample(set, o.samples, data_seed(seed));
    const auto w = gaussian_width_mc(points, o.trials, seed);
    ComplexityEstimate e;
    e.set_id = set.kind();
    e.width = w.estimate;
    e.width_stderr = w.standard_error;
    e.diameter = euclidean_diameter(points);
    std::string dudley;
    if (o.profile.dim) {
        e.dudley = dudley_integral(CoveringProfile::analytic(*o.profile.dim, o.profile.c, o.profile.base),
                                   o.profile.diameter);
        dudley = csv::format(e.dudley);
    }
    Output dst(c.output, out);
    csv::row(*dst, "set_id", "n", "samples", "trials", "width", "width_stderr", "diameter", "dudley", "seed", "C",
             "alpha");
    csv::row(*dst, e.set_id, points.dim(), points.size(), o.trials, e.width, e.width_stderr, e.diameter, dudley,
             std::to_string(seed), c.C, effective_alpha(c));
    err << "width: " << csv::format(e.width) << " +- " << csv::format(e.width_stderr) << "\n";
    return ok;
}

// ---------------------------------------------------------------- recover

struct RecoverOptions {
    std::string sketch_file;
    std::string y_file;
    std::string model = "sparse";
    Index n = 64;
    Index m = 32;
    Index s = 3;
    Index count = 16;
    double noise = 0.0;
    double mu = 1.0;
    std::string step = "fixed";
    Index max_iters = 100;
    double tol = 1e-10;
    std::optional<double> eps;
    std::string summary;
};

int run_recover(const RecoverOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    std::optional<Sketch> sketch;
    Vector y;
    std::optional<Vector> truth;
    std::optional<std::uint64_t> seed = optional_seed(c);
    if (!o.sketch_file.empty()) {
        std::ifstream in(o.sketch_file);
        if (!in) throw ConfigError("cannot open " + o.sketch_file);
        sketch = read_sketch_csv(in);
        if (o.y_file.empty()) throw ConfigError("recover with --sketch-file needs --y-file");
        std::ifstream yin(o.y_file);
        if (!yin) throw ConfigError("cannot open " + o.y_file);
        y = csv::read_vector(yin);
    } else {
        const std::uint64_t sd = require_seed(c);
        SketchSpec spec = family_spec(c);
        spec.m = o.m;
        spec.n = o.n;
        spec.seed = sd;
        sketch = build_sketch(spec);
        if (o.model != "sparse") throw ConfigError("synthetic recovery supports the sparse model only");
        truth = sparse_signal(o.n, o.s, mix64(sd ^ 0x5eedULL));
        y = sketch->matrix() * *truth;
        if (o.noise > 0.0) {
            Rng rng(data_seed(sd), 7);
            for (Index i = 0; i < y.size(); ++i) y(i) += o.noise * rng.normal();
        }
    }
    const Index n = sketch->cols();
    StructuredSet model = o.model == "sparse"  ? StructuredSet::sparse(n, o.s)
                          : o.model == "uos" ? StructuredSet::union_of(rotating_plane_family(n).discretize(o.count))
                                             : throw ConfigError("recover model must be sparse or uos");
    RecoveryOptions opts;
    opts.mu = o.mu;
    opts.step = parse_step_rule(o.step);
    opts.max_iters = o.max_iters;
    opts.tol = o.tol;
    opts.eps_estimate = o.eps;
    const RecoveryProblem problem{*sketch, y, model, o.noise};
    const RecoveryResult res = landweber_recover(problem, opts);

    const double alpha = c.alpha ? *c.alpha : sketch->alpha();
    Output dst(c.output, out);
    csv::row(*dst, "index", "value", "seed", "C", "alpha");
    for (Index i = 0; i < n; ++i) csv::row(*dst, i, res.estimate(i), seed_cell(seed), c.C, alpha);

    nlohmann::ordered_json summary;
    summary["status"] = status_name(res.status);
    summary["step"] = o.step;
    summary["mu"] = o.mu;
    summary["iterations"] = res.iterations;
    summary["final_residual"] = res.residuals.back();
    summary["residuals"] = res.residuals;
    if (truth) summary["relative_error"] = relative_error(*truth, res.estimate);
    if (res.warning) summary["warning"] = *res.warning;
    if (!o.summary.empty()) {
        std::ofstream s(o.summary, std::ios::binary);
        if (!s) throw ConfigError("cannot write " + o.summary);
        s << summary.dump(2) << "\n";
    }
    summary.erase("residuals");
    err << summary.dump() << "\n";
    return ok;
}

// -------------------------------------------------------------- calibrate

struct CalibrateOptions {
    std::string model = "jl_finite";
    Index n = 512;
    Index points = 100;
    Index s = 2;
    double eps = 0.25;
    double delta = 0.5;
    double eta = 0.1;
    Index trials = 100;
    Index max_m = 0;
    int max_k = 8;
};

int run_calibrate(const CalibrateOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    const std::uint64_t seed = require_seed(c);
    const SketchSpec fam = family_spec(c);
    CalibrationConfig cfg;
    if (o.model == "jl_finite") {
        JLBenchmark b;
        b.n = o.n;
        b.points = o.points;
        b.eps = o.eps;
        b.eta = o.eta;
        b.data_seed = data_seed(seed);
        b.family = fam.family;
        b.q = fam.q;
        cfg = jl_calibration(b, o.trials, seed, c.jobs, o.max_m);
    } else if (o.model == "sparse") {
        cfg.model.variant = BoundVariant::sparse;
        cfg.model.set("n", static_cast<double>(o.n)).set("s", static_cast<double>(o.s)).set("delta", o.delta).set("eta", o.eta);
        cfg.target = o.delta;
        cfg.eta = o.eta;
        cfg.trials = o.trials;
        cfg.seed = seed;
        cfg.jobs = c.jobs;
        cfg.max_m = o.max_m > 0 ? o.max_m : o.n;
        const Index n = o.n, s = o.s;
        cfg.measure = [fam, n, s](Index m, std::uint64_t sd) { return sparse_rip_trial(fam.family, fam.q, m, n, s, sd); };
    } else {
        throw ConfigError("calibrate supports jl_finite and sparse");
    }
    cfg.alpha = sketch_alpha(c);
    cfg.max_k = o.max_k;
    const auto result = calibrate_C(cfg);
    Output dst(c.output, out);
    csv::row(*dst, "model", "C", "m", "failures", "trials", "failure_rate", "wilson_lower", "wilson_upper", "selected",
             "seed", "alpha");
    for (const auto& st : result.steps)
        csv::row(*dst, o.model, st.C, st.m, st.rate.failures, st.rate.trials, st.rate.rate, st.rate.interval.lower,
                 st.rate.interval.upper, result.C && *result.C == st.C ? 1 : 0, std::to_string(seed), cfg.alpha);
    if (result.C)
        err << "calibrate: C=" << csv::format(*result.C) << " (m=" << result.m << ", grid factor 2)\n";
    else
        err << "calibrate: no grid point reached failure rate <= " << csv::format(cfg.eta) << " within m <= "
            << cfg.max_m << "\n";
    return ok;
}

// ------------------------------------------------------------------ props

struct PropsOptions {
    std::string suite = "chords";
    Index samples = 100000;
    Index n = 8;
};

int run_props(const PropsOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    const std::uint64_t seed = require_seed(c);
    if (o.samples < 1) throw ConfigError("samples must be >= 1");
    const double alpha = effective_alpha(c);
    Output dst(c.output, out);
    csv::row(*dst, "suite", "check", "checked", "violations", "worst_ratio", "seed", "C", "alpha");
    Index total = 0;
    auto emit = [&](const std::string& check, Index checked, Index violations, double worst) {
        csv::row(*dst, o.suite, check, checked, violations, worst, std::to_string(seed), c.C, alpha);
        total += violations;
    };
    if (o.suite == "chords") {
        const auto lc = check_long_chords(o.samples, o.n, seed);
        emit("long_chords", lc.checked, lc.violations, lc.worst_ratio);
        const auto sc = check_short_chords(ManifoldSpec::circle(1.0, 2), 1.0, o.samples, seed);
        emit("iota_reach", sc.checked, sc.iota_violations, sc.worst_iota_ratio);
        emit("finsler_reach", sc.checked, sc.finsler_violations, sc.worst_finsler_ratio);
    } else if (o.suite == "finsler") {
        Rng rng(seed, 31);
        Index violations = 0;
        double worst = 0.0;
        for (Index t = 0; t < o.samples; ++t) {
            const Index n = 2 + static_cast<Index>(rng.below(49));
            const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min<Index>(10, n))));
            const auto u = Subspace::span_of(gaussian_cloud(k, n, rng.next_u64()).matrix());
            const auto v = Subspace::span_of(gaussian_cloud(k, n, rng.next_u64()).matrix());
            if (u.dim() != v.dim()) continue;
            const double gap = std::abs(finsler_distance(u, v) - std::sin(principal_angles(u, v).front()));
            worst = std::max(worst, gap);
            if (gap > 1e-10) ++violations;
        }
        emit("finsler_sin_angle", o.samples, violations, worst);
    } else {
        throw ConfigError("unknown props suite '" + o.suite + "'");
    }
    err << "props: " << o.suite << " suite, " << total << " violation(s)\n";
    return ok;
}

// ------------------------------------------------------------- config file

std::string json_scalar(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return csv::format(v.get<double>());
    throw ConfigError("config key '" + key + "' has an unsupported value");
}

// Expands --config <file> into ordinary flags. Flags given on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args, CLI::App& app) {
    std::string path;
    for (auto it = args.begin(); it != args.end();) {
        if (*it == "--config") {
            if (std::next(it) == args.end()) throw ConfigError("--config needs a file");
            path = *std::next(it);
            it = args.erase(it, std::next(it, 2));
        } else if (it->rfind("--config=", 0) == 0) {
            path = it->substr(9);
            it = args.erase(it);
        } else {
            ++it;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    auto cmd = std::find_if(args.begin(), args.end(), [](const std::string& a) {
        return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
    });
    std::string command;
    if (cmd != args.end()) {
        command = *cmd;
    } else if (doc.contains("command")) {
        command = doc["command"].get<std::string>();
        args.insert(args.begin(), command);
    } else {
        throw ConfigError("no command given on the command line or in the config");
    }
    CLI::App* sub = app.get_subcommand(command);
    std::set<std::string> given;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));

    for (const auto& [key, value] : doc.items()) {
        if (key == "command") continue;
        std::string name = key;
        if (!sub->get_option_no_throw("--" + name)) std::replace(name.begin(), name.end(), '_', '-');
        if (!sub->get_option_no_throw("--" + name)) throw ConfigError("unknown config key '" + key + "'");
        if (given.count(name)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + name);
            continue;
        }
        if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) joined += (joined.empty() ? "" : ",") + json_scalar(item, key);
            args.push_back("--" + name);
            args.push_back(joined);
            continue;
        }
        args.push_back("--" + name);
        args.push_back(json_scalar(value, key));
    }
    return args;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random dimensionality reduction experiments"};
    app.name("sketchlab");
    app.require_subcommand(1);

    Common common;
    BoundOptions bound;
    DistortOptions distort;
    PhaseOptions phase;
    WidthOptions width;
    RecoverOptions recover;
    CalibrateOptions calibrate;
    PropsOptions props;

    auto* b = app.add_subcommand("bound", "Target dimension m from a bound model");
    add_common(b, common);
    b->add_option("--model", bound.model, "Bound variant, e.g. jl_finite, sparse, matrix");
    for (const auto& name : bound_parameter_names()) b->add_option("--" + name, bound.values[name]);
    b->add_option("--dims", bound.dims, "Tensor mode sizes")->delimiter(',');
    b->add_option("--ranks", bound.ranks, "Tensor ranks")->delimiter(',');
    b->add_option("--batch", bound.batch, "CSV of models and parameters, one bound per row");
    add_profile_options(b, bound.profile);

    auto* d = app.add_subcommand("distort", "Measure kappa, delta, epsilon, zeta of a sketch on a set");
    add_common(d, common);
    add_set_options(d, distort.set);
    d->add_option("--m", distort.m, "Sketch rows")->required();
    d->add_option("--samples", distort.samples, "Monte Carlo samples");
    d->add_option("--trials", distort.trials, "Independent sketch draws");

    auto* ph = app.add_subcommand("phase", "Median precision and failure rate over an m grid");
    add_common(ph, common);
    add_set_options(ph, phase.set);
    ph->add_option("--m-grid", phase.grid, "start:stop:step")->required();
    ph->add_option("--trials", phase.trials);
    ph->add_option("--samples", phase.samples, "Points sampled from non-finite sets");
    ph->add_option("--target", phase.target, "Failure threshold on epsilon");

    auto* w = app.add_subcommand("width", "Monte Carlo Gaussian width and Dudley bound");
    add_common(w, common);
    add_set_options(w, width.set);
    w->add_option("--samples", width.samples);
    w->add_option("--trials", width.trials);
    add_profile_options(w, width.profile);

    auto* r = app.add_subcommand("recover", "Projective Landweber recovery");
    add_common(r, common);
    r->add_option("--sketch-file", recover.sketch_file);
    r->add_option("--y-file", recover.y_file);
    r->add_option("--model", recover.model, "sparse or uos");
    r->add_option("--n", recover.n);
    r->add_option("--m", recover.m);
    r->add_option("--s", recover.s);
    r->add_option("--count", recover.count);
    r->add_option("--noise", recover.noise);
    r->add_option("--mu", recover.mu, "Step size (scale of the normalized step)");
    r->add_option("--step", recover.step, "fixed or normalized");
    r->add_option("--max-iters", recover.max_iters);
    r->add_option("--tol", recover.tol);
    r->add_option("--eps", recover.eps, "Precision estimate on U - U for the bilipschitz check");
    r->add_option("--summary", recover.summary, "JSON summary path");

    auto* cal = app.add_subcommand("calibrate", "Smallest grid C meeting the failure rate");
    add_common(cal, common);
    cal->add_option("--model", calibrate.model, "jl_finite or sparse");
    cal->add_option("--n", calibrate.n);
    cal->add_option("--points", calibrate.points);
    cal->add_option("--s", calibrate.s);
    cal->add_option("--eps", calibrate.eps);
    cal->add_option("--delta", calibrate.delta);
    cal->add_option("--eta", calibrate.eta);
    cal->add_option("--trials", calibrate.trials);
    cal->add_option("--max-m", calibrate.max_m);
    cal->add_option("--max-k", calibrate.max_k);

    auto* pr = app.add_subcommand("props", "Property suites");
    add_common(pr, common);
    pr->add_option("--suite", props.suite, "chords or finsler");
    pr->add_option("--samples", props.samples);
    pr->add_option("--n", props.n, "Ambient dimension for the long-chord suite");

    try {
        auto args = expand_config(raw_args, app);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return config_error;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }

    try {
        if (b->parsed()) return run_bound(bound, common, out, err);
        if (d->parsed()) return run_distort(distort, common, out, err);
        if (ph->parsed()) return run_phase(phase, common, out, err);
        if (w->parsed()) return run_width(width, common, out, err);
        if (r->parsed()) return run_recover(recover, common, out, err);
        if (cal->parsed()) return run_calibrate(calibrate, common, out, err);
        if (pr->parsed()) return run_props(props, common, out, err);
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return infeasible;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }
    return internal_error;
}

}  // namespace sketchlab::cli

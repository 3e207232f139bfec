#include "sketchlab/sketch.hpp"

#include "sketchlab/csv.hpp"
#include "sketchlab/error.hpp"
#include "sketchlab/random.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

namespace sketchlab {

namespace {

constexpr std::uint64_t kGaussianStream = 1;
constexpr std::uint64_t kRademacherStream = 2;
constexpr std::uint64_t kAchlioptasStream = 3;

void validate(const SketchSpec& spec) {
    if (spec.m < 1 || spec.n < 1) throw InvalidArgument("sketch dimensions must be positive");
    if (spec.family == Family::achlioptas && !(spec.q >= 1.0 && std::isfinite(spec.q)))
        throw InvalidArgument("achlioptas sparsity q must be a finite number >= 1");
}

}  // namespace

std::string family_name(Family family, double q) {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::rademacher: return "rademacher";
        case Family::achlioptas: return "achlioptas:" + csv::format(q);
    }
    return "unknown";
}

SketchSpec parse_family(const std::string& text) {
    SketchSpec spec;
    if (text == "gaussian") {
        spec.family = Family::gaussian;
    } else if (text == "rademacher") {
        spec.family = Family::rademacher;
    } else if (text == "achlioptas") {
        spec.family = Family::achlioptas;
        spec.q = 3.0;
    } else if (text.rfind("achlioptas:", 0) == 0) {
        spec.family = Family::achlioptas;
        spec.q = csv::parse_double(std::string_view(text).substr(11));
        if (!(spec.q >= 1.0)) throw InvalidArgument("achlioptas sparsity q must be >= 1");
    } else {
        throw InvalidArgument("unknown sketch family '" + text + "'");
    }
    return spec;
}

double family_alpha(Family family, double q) {
    switch (family) {
        case Family::gaussian: return 8.0 / 3.0;
        case Family::rademacher: return 8.0 / 3.0;
        case Family::achlioptas: return q;
    }
    return 1.0;
}

double sketch_entry(const SketchSpec& spec, Index i, Index j) {
    const auto index = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(spec.n) +
                       static_cast<std::uint64_t>(j);
    switch (spec.family) {
        case Family::gaussian: return normal_at(spec.seed, kGaussianStream, index);
        case Family::rademacher:
            return (counter_hash(spec.seed, kRademacherStream, index) >> 63) ? 1.0 : -1.0;
        case Family::achlioptas: {
            const double u = unit_open(counter_hash(spec.seed, kAchlioptasStream, index));
            const double half = 0.5 / spec.q;
            if (u < half) return -std::sqrt(spec.q);
            if (u < 2.0 * half) return std::sqrt(spec.q);
            return 0.0;
        }
    }
    return 0.0;
}

Sketch::Sketch(Matrix matrix, SketchSpec spec, double alpha)
    : matrix_(std::move(matrix)), spec_(spec), alpha_(alpha) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1) throw InvalidArgument("sketch matrix is empty");
    if (!(alpha_ >= 1.0)) throw InvalidArgument("sketch alpha must be >= 1");
    spec_.m = matrix_.rows();
    spec_.n = matrix_.cols();
}

Sketch build_sketch(const SketchSpec& spec) {
    validate(spec);
    Matrix g(spec.m, spec.n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
    for (Index j = 0; j < spec.n; ++j)
        for (Index i = 0; i < spec.m; ++i) g(i, j) = scale * sketch_entry(spec, i, j);
    return Sketch(std::move(g), spec, family_alpha(spec.family, spec.q));
}

Sketch sketch_from_matrix(Matrix matrix, double alpha) {
    SketchSpec spec;
    spec.m = matrix.rows();
    spec.n = matrix.cols();
    return Sketch(std::move(matrix), spec, alpha);
}

Vector apply(const Sketch& sketch, const Vector& x) {
    if (x.size() != sketch.cols())
        throw DimensionMismatch("apply: vector has dimension " + std::to_string(x.size()) +
                                ", sketch expects " + std::to_string(sketch.cols()));
    return sketch.matrix() * x;
}

Tensor::Tensor(std::vector<Index> d, std::vector<double> values)
    : dims(std::move(d)), data(std::move(values)) {
    const Index expected =
        std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<Index>());
    if (dims.empty() || expected != static_cast<Index>(data.size()))
        throw DimensionMismatch("tensor data size does not match its dimensions");
}

Tensor Tensor::filled(std::vector<Index> dims, double value) {
    const Index count =
        std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<Index>());
    return Tensor(std::move(dims), std::vector<double>(static_cast<std::size_t>(count), value));
}

Vector flatten(const Matrix& x) {
    Vector out(x.size());
    Index k = 0;
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) out(k++) = x(i, j);
    return out;
}

Vector flatten(const Tensor& x) {
    return Eigen::Map<const Vector>(x.data.data(), x.size());
}

Vector apply_flat(const Sketch& sketch, const Matrix& x) {
    if (x.size() != sketch.cols()) throw DimensionMismatch("apply_flat: matrix size does not match sketch");
    return apply(sketch, flatten(x));
}

Vector apply_flat(const Sketch& sketch, const Tensor& x) {
    if (x.size() != sketch.cols()) throw DimensionMismatch("apply_flat: tensor size does not match sketch");
    return apply(sketch, flatten(x));
}

void write_sketch_csv(std::ostream& out, const Sketch& sketch) {
    const auto& spec = sketch.spec();
    out << "m,n,family,seed\n";
    csv::row(out, sketch.rows(), sketch.cols(), family_name(spec.family, spec.q),
             std::to_string(spec.seed));
    const Matrix& a = sketch.matrix();
    std::vector<std::string> cells(static_cast<std::size_t>(a.cols()));
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) cells[static_cast<std::size_t>(j)] = csv::format(a(i, j));
        csv::write_row(out, cells);
    }
}

Sketch read_sketch_csv(std::istream& in) {
    std::string line;
    if (!csv::next_line(in, line) || line != "m,n,family,seed")
        throw FormatError("sketch CSV must start with the header 'm,n,family,seed'");
    if (!csv::next_line(in, line)) throw FormatError("sketch CSV is missing its metadata row");
    const auto meta = csv::split_line(line);
    if (meta.size() != 4) throw FormatError("sketch CSV metadata row needs 4 fields");
    SketchSpec spec = parse_family(meta[2]);
    spec.m = csv::parse_integer(meta[0]);
    spec.n = csv::parse_integer(meta[1]);
    spec.seed = std::stoull(meta[3]);
    validate(spec);
    Matrix a(spec.m, spec.n);
    for (Index i = 0; i < spec.m; ++i) {
        if (!csv::next_line(in, line)) throw FormatError("sketch CSV has fewer rows than m");
        const auto cells = csv::split_line(line);
        if (static_cast<Index>(cells.size()) != spec.n) throw FormatError("sketch CSV row has wrong width");
        for (Index j = 0; j < spec.n; ++j) a(i, j) = csv::parse_double(cells[static_cast<std::size_t>(j)]);
    }
    return Sketch(std::move(a), spec, family_alpha(spec.family, spec.q));
}

}  // namespace sketchlab

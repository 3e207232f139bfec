#pragma once

#include "sketchlab/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sketchlab {

enum class Family { gaussian, rademacher, achlioptas };

/// Distribution family, shape and seed of a subgaussian map Phi = G / sqrt(m).
struct SketchSpec {
    Family family = Family::gaussian;
    double q = 1.0;  ///< sparsity parameter, achlioptas only
    Index m = 1;
    Index n = 1;
    std::uint64_t seed = 0;
};

/// "gaussian", "rademacher" or "achlioptas:<q>".
std::string family_name(Family family, double q = 1.0);
/// Inverse of family_name; plain "achlioptas" means q = 3.
SketchSpec parse_family(const std::string& text);

/// Subgaussian parameter alpha >= 1 assigned to a family.
double family_alpha(Family family, double q = 1.0);

/// Unscaled entry (i, j) of G; a pure function of (spec.seed, i, j) that
/// does not depend on m, so sketches sharing a seed share their leading rows.
double sketch_entry(const SketchSpec& spec, Index i, Index j);

/// A realized m x n sketch, already scaled by 1/sqrt(m).
class Sketch {
public:
    Sketch(Matrix matrix, SketchSpec spec, double alpha);

    const Matrix& matrix() const noexcept { return matrix_; }
    const SketchSpec& spec() const noexcept { return spec_; }
    double alpha() const noexcept { return alpha_; }
    Index rows() const noexcept { return matrix_.rows(); }
    Index cols() const noexcept { return matrix_.cols(); }

private:
    Matrix matrix_;
    SketchSpec spec_;
    double alpha_;
};

Sketch build_sketch(const SketchSpec& spec);

/// Wraps a fixed matrix (identity, scaled identity, ...) as a sketch; handy as a test fixture.
Sketch sketch_from_matrix(Matrix matrix, double alpha = 1.0);

Vector apply(const Sketch& sketch, const Vector& x);

/// Dense tensor with row-major (last index fastest) storage.
struct Tensor {
    std::vector<Index> dims;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<Index> dims, std::vector<double> data);
    static Tensor filled(std::vector<Index> dims, double value);

    Index size() const noexcept { return static_cast<Index>(data.size()); }
};

Vector flatten(const Matrix& x);
Vector flatten(const Tensor& x);

/// Applies the sketch to the row-major flattening of a matrix or tensor.
Vector apply_flat(const Sketch& sketch, const Matrix& x);
Vector apply_flat(const Sketch& sketch, const Tensor& x);

/// Two header lines (column names, then m,n,family,seed values) followed by m rows of n values.
void write_sketch_csv(std::ostream& out, const Sketch& sketch);
Sketch read_sketch_csv(std::istream& in);

}  // namespace sketchlab

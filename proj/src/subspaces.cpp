#include "sketchlab/subspaces.hpp"

#include "sketchlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sketchlab {

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() < 1) throw InvalidArgument("subspace needs a positive ambient dimension");
    if (basis_.cols() > 0) {
        const Matrix gram = basis_.transpose() * basis_;
        const double err = (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
        if (!(err <= 1e-12)) throw InvalidArgument("subspace basis is not orthonormal");
    }
}

Subspace Subspace::span_of(const Matrix& vectors) {
    if (vectors.rows() < 1) throw InvalidArgument("span_of: vectors need a positive dimension");
    if (vectors.cols() == 0 || vectors.cwiseAbs().maxCoeff() == 0.0)
        return Subspace(Matrix(vectors.rows(), 0));
    Eigen::ColPivHouseholderQR<Matrix> qr(vectors);
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    Matrix q = qr.householderQ() * Matrix::Identity(vectors.rows(), rank);
    return Subspace(std::move(q));
}

Subspace Subspace::coordinate(Index n, const std::vector<Index>& support) {
    Matrix b = Matrix::Zero(n, static_cast<Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) {
        if (support[c] < 0 || support[c] >= n) throw InvalidArgument("coordinate subspace index out of range");
        b(support[c], static_cast<Index>(c)) = 1.0;
    }
    return Subspace(std::move(b));
}

Matrix projector(const Subspace& s) { return s.basis() * s.basis().transpose(); }

std::vector<double> principal_angles(const Subspace& u, const Subspace& v) {
    if (u.dim() == 0 || v.dim() == 0) throw InvalidArgument("principal angles of a zero-dimensional subspace");
    if (u.ambient_dim() != v.ambient_dim()) throw DimensionMismatch("principal_angles: ambient mismatch");
    const Matrix& a = u.dim() <= v.dim() ? u.basis() : v.basis();
    const Matrix& b = u.dim() <= v.dim() ? v.basis() : u.basis();
    const Matrix cross = b.transpose() * a;
    // cosines from the overlap, sines from the residual; atan2 keeps small angles accurate
    const Vector cosines = Eigen::JacobiSVD<Matrix>(cross).singularValues();     // nonincreasing
    const Vector sines = Eigen::JacobiSVD<Matrix>(a - b * cross).singularValues();  // nonincreasing
    const Index k = a.cols();
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i)
        angles.push_back(std::atan2(std::clamp(sines(i), 0.0, 1.0), std::clamp(cosines(k - 1 - i), 0.0, 1.0)));
    return angles;
}

double finsler_distance(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw DimensionMismatch("finsler_distance: ambient mismatch");
    Matrix diff = projector(u) - projector(v);
    // fix the sign so that (u, v) and (v, u) solve the same matrix
    const double* first = std::find_if(diff.data(), diff.data() + diff.size(), [](double x) { return x != 0.0; });
    if (first == diff.data() + diff.size()) return 0.0;
    if (*first < 0.0) diff = -diff;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
    const double value = eig.eigenvalues().cwiseAbs().maxCoeff();
    return std::min(value, 1.0);
}

Subspace joint_subspace(const Subspace& u, const Subspace& v) {
    if (u.ambient_dim() != v.ambient_dim()) throw DimensionMismatch("joint_subspace: ambient mismatch");
    Matrix both(u.ambient_dim(), u.dim() + v.dim());
    both << u.basis(), v.basis();
    return Subspace::span_of(both);
}

std::vector<Subspace> UoSFamily::discretize(Index count) const {
    if (count < 1) throw InvalidArgument("discretize needs a positive count");
    std::vector<Subspace> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        const double t = count == 1 ? theta_min
                                    : theta_min + (theta_max - theta_min) * static_cast<double>(i) /
                                                      static_cast<double>(count - 1);
        out.push_back(subspace_of(t));
    }
    return out;
}

UoSFamily rotating_plane_family(Index n) {
    if (n < 3) throw InvalidArgument("rotating_plane_family needs n >= 3");
    UoSFamily family;
    family.theta_min = 0.0;
    family.theta_max = std::numbers::pi / 2.0;
    family.max_dim = 2;
    family.subspace_of = [n](double theta) {
        Matrix b = Matrix::Zero(n, 2);
        b(0, 0) = std::cos(theta);
        b(1, 0) = std::sin(theta);
        b(2, 1) = 1.0;
        return Subspace(std::move(b));
    };
    // d_Fin(theta, theta') = sin|theta - theta'| <= |theta - theta'|; a
    // radius-u ball covers a parameter interval of length 2u, so
    // N(u) <= (pi/2)/(2u) + 1 <= (1 + pi/4)/u on the unit diameter.
    family.finsler_covering = FinslerCovering{1.0, 1.0 + std::numbers::pi / 4.0, 1.0};
    return family;
}

}  // namespace sketchlab

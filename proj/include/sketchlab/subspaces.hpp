#pragma once

#include "sketchlab/core.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sketchlab {

/// Linear subspace of R^n held as an n x k matrix with orthonormal columns.
/// k = 0 (the trivial subspace) is representable.
class Subspace {
public:
    /// Checks orthonormality of `basis` to 1e-12; throws InvalidArgument otherwise.
    explicit Subspace(Matrix basis);

    /// Orthonormal basis of the span of the columns (QR with column pivoting,
    /// directions below 1e-10 of the largest pivot are dropped).
    static Subspace span_of(const Matrix& vectors);
    /// Span of standard basis vectors e_i, i in `support`.
    static Subspace coordinate(Index n, const std::vector<Index>& support);

    const Matrix& basis() const noexcept { return basis_; }
    Index dim() const noexcept { return basis_.cols(); }
    Index ambient_dim() const noexcept { return basis_.rows(); }

private:
    Matrix basis_;
};

/// Orthogonal projector B B^T.
Matrix projector(const Subspace& s);

/// Principal angles in nonincreasing order, min(dim U, dim V) of them.
std::vector<double> principal_angles(const Subspace& u, const Subspace& v);

/// Operator norm of P_U - P_V.
double finsler_distance(const Subspace& u, const Subspace& v);

/// Orthonormal basis of span(U u V).
Subspace joint_subspace(const Subspace& u, const Subspace& v);

/// Covering profile of a parameter set in the Finsler metric:
/// N(u * diameter) <= base * (c / u)^dimension.
struct FinslerCovering {
    double dimension = 1.0;
    double c = 1.0;
    double base = 1.0;
};

/// Parametrized union of subspaces over an interval of a scalar parameter.
struct UoSFamily {
    double theta_min = 0.0;
    double theta_max = 1.0;
    std::function<Subspace(double)> subspace_of;
    Index max_dim = 0;  ///< K, the largest subspace dimension
    std::optional<FinslerCovering> finsler_covering;

    /// `count` subspaces at evenly spaced parameters including both ends.
    std::vector<Subspace> discretize(Index count) const;
};

/// theta in [0, pi/2] -> span{cos(theta) e1 + sin(theta) e2, e3}.
UoSFamily rotating_plane_family(Index n);

}  // namespace sketchlab

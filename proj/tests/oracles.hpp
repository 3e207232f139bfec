#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical routines.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Eigenvalues of a symmetric 1x1, 2x2 or 3x3 matrix (row-major), closed form.
inline std::vector<double> sym_eigenvalues(const std::vector<double>& a, int k) {
    if (k == 1) return {a[0]};
    if (k == 2) {
        const double tr = a[0] + a[3];
        const double det = a[0] * a[3] - a[1] * a[2];
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        return {tr / 2.0 - disc, tr / 2.0 + disc};
    }
    // trigonometric solution of the characteristic cubic
    const double p1 = a[1] * a[1] + a[2] * a[2] + a[5] * a[5];
    const double q = (a[0] + a[4] + a[8]) / 3.0;
    const double p2 = (a[0] - q) * (a[0] - q) + (a[4] - q) * (a[4] - q) + (a[8] - q) * (a[8] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return {q, q, q};
    std::array<double, 9> b{};
    for (int i = 0; i < 9; ++i) b[i] = (a[i] - (i % 4 == 0 ? q : 0.0)) / p;
    const double detb = b[0] * (b[4] * b[8] - b[5] * b[7]) - b[1] * (b[3] * b[8] - b[5] * b[6]) +
                        b[2] * (b[3] * b[7] - b[4] * b[6]);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    return {e3, 3.0 * q - e1 - e3, e1};
}

/// All s-subsets of {0..n-1} by recursion.
inline void subsets(int n, int s, std::vector<int>& cur, int start, const std::function<void(const std::vector<int>&)>& f) {
    if (static_cast<int>(cur.size()) == s) {
        f(cur);
        return;
    }
    for (int i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, s, cur, i + 1, f);
        cur.pop_back();
    }
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle

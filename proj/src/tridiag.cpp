#include "qosc/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qosc/errors.hpp"

namespace qosc {

namespace {

double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace

// Implicit-shift QL with Wilkinson-style shifts, eigenvectors accumulated by
// applying each plane rotation to the identity (EISPACK tql2 lineage).
TridiagEigen tridiag_eigen_ql(std::vector<double> d, std::vector<double> e) {
    const int n = static_cast<int>(d.size());
    if (n == 0) throw std::invalid_argument("tridiag_eigen_ql: empty matrix");
    if (static_cast<int>(e.size()) != n - 1) {
        throw std::invalid_argument("tridiag_eigen_ql: off-diagonal size must be n-1");
    }

    TridiagEigen out;
    out.n = n;
    out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) out.vectors[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto z = [&out, n](int r, int c) -> double& {
        return out.vectors[static_cast<std::size_t>(r) * n + c];
    };

    e.push_back(0.0);  // e[n-1] sentinel
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) {
                    throw NumericError("tridiag_eigen_ql: QL iteration failed to converge");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // Deterministic ordering: ascending eigenvalues, then flip each column so
    // its first component above the noise floor is positive.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&d](int a, int b) { return d[static_cast<std::size_t>(a)] <
                                                 d[static_cast<std::size_t>(b)]; });

    TridiagEigen sorted;
    sorted.n = n;
    sorted.lambdas.resize(static_cast<std::size_t>(n));
    sorted.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int c = 0; c < n; ++c) {
        const int src = order[static_cast<std::size_t>(c)];
        sorted.lambdas[static_cast<std::size_t>(c)] = d[static_cast<std::size_t>(src)];
        double flip = 1.0;
        for (int r = 0; r < n; ++r) {
            const double val = z(r, src);
            if (std::abs(val) > 1e-12) {
                flip = val > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int r = 0; r < n; ++r) {
            sorted.vectors[static_cast<std::size_t>(r) * n + c] = flip * z(r, src);
        }
    }
    return sorted;
}

}  // namespace qosc

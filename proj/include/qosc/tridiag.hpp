// tridiag.hpp — symmetric tridiagonal eigensolver (implicit-shift QL)
#pragma once

#include <vector>

namespace qosc {

// Eigen decomposition of a real symmetric tridiagonal matrix.
// lambdas ascending; vectors row-major n x n with column k the unit
// eigenvector of lambdas[k], sign-fixed so its first nonzero component is
// positive. The double sort+sign pass makes the output deterministic and
// reproducible across platforms.
struct TridiagEigen {
    int n = 0;
    std::vector<double> lambdas;
    std::vector<double> vectors;

    double vec(int row, int col) const {
        return vectors[static_cast<std::size_t>(row) * n + col];
    }
};

// diag has n entries, off has n-1. Throws NumericError if the QL iteration
// fails to converge (does not happen for well-scaled physical inputs).
TridiagEigen tridiag_eigen_ql(std::vector<double> diag, std::vector<double> off);

}  // namespace qosc

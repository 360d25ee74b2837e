#pragma once

#include <vector>

namespace strata {

struct NnlsResult {
  std::vector<double> x;
  double residual = 0.0;  // |A x - b|
  bool converged = true;
};

/// min |A x - b| subject to x >= 0 (Lawson-Hanson active set). A is given
/// by its columns, all of length b.size().
NnlsResult nnls(const std::vector<std::vector<double>>& columns, const std::vector<double>& b);

/// Is b in the closed conic hull of the columns, within tol?
bool in_conic_hull(const std::vector<std::vector<double>>& columns, const std::vector<double>& b,
                   double tol);

}  // namespace strata

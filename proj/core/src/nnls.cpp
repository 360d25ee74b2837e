#include "strata/nnls.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace strata {

NnlsResult nnls(const std::vector<std::vector<double>>& columns, const std::vector<double>& b) {
  const auto m = static_cast<Eigen::Index>(b.size());
  const auto n = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd A(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) A(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), m);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
  NnlsResult out;
  const int max_outer = 3 * static_cast<int>(n) + 10;

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    z = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd Ap(m, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(bv);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  int outer = 0;
  for (; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (bv - A * x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd z;
    for (int inner = 0; inner < 3 * static_cast<int>(n) + 10; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) break;
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && std::abs(x(j)) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    x = z.cwiseMax(0.0);
  }
  out.converged = outer < max_outer;
  out.x.assign(x.data(), x.data() + n);
  out.residual = (A * x - bv).norm();
  return out;
}

bool in_conic_hull(const std::vector<std::vector<double>>& columns, const std::vector<double>& b,
                   double tol) {
  double bn = 0.0;
  for (double v : b) bn += v * v;
  if (std::sqrt(bn) <= tol) return true;
  if (columns.empty()) return false;
  return nnls(columns, b).residual <= tol;
}

}  // namespace strata

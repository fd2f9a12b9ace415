#include "dgnn/ppr.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dgnn {

void PprTable::validate() const {
  for (int i = 0; i < n(); ++i) {
    for (int j = 0; j < k(); ++j) {
      if (scores(i, j) < 0.0) throw std::invalid_argument("ppr table: negative score");
      if (j > 0 && scores(i, j) > scores(i, j - 1)) {
        throw std::invalid_argument("ppr table: scores not non-increasing");
      }
      for (int l = 0; l < j; ++l) {
        if (indices(i, l) == indices(i, j)) {
          throw std::invalid_argument("ppr table: duplicate neighbor index");
        }
      }
    }
  }
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("ppr: teleport probability must lie in (0, 1]");
  }
}

// Top-k of one score vector; ties go to the smaller node index.
void topk_into(const Eigen::VectorXd& column, int k, int row, PprTable& table) {
  const int n = static_cast<int>(column.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    if (column(a) != column(b)) return column(a) > column(b);
    return a < b;
  });
  for (int j = 0; j < k; ++j) {
    table.indices(row, j) = order[j];
    table.scores(row, j) = column(order[j]);
  }
}

}  // namespace

Eigen::MatrixXd ppr_exact(const Eigen::MatrixXd& a_norm, double alpha) {
  check_alpha(alpha);
  const int n = static_cast<int>(a_norm.rows());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * a_norm;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (lu.determinant() == 0.0) {
    throw std::runtime_error("ppr_exact: singular system");
  }
  return alpha * lu.solve(Eigen::MatrixXd::Identity(n, n));
}

PprTable topk_neighbors(const Eigen::MatrixXd& ppr, int k) {
  const int n = static_cast<int>(ppr.rows());
  if (k < 1 || k > n) throw std::domain_error("topk_neighbors: need 1 <= k <= n");
  PprTable table;
  table.indices.resize(n, k);
  table.scores.resize(n, k);
  for (int i = 0; i < n; ++i) {
    topk_into(ppr.row(i).transpose(), k, i, table);
  }
  return table;
}

PprTable ppr_topk(const Eigen::SparseMatrix<double>& a_norm, double alpha, int k, int block) {
  check_alpha(alpha);
  const int n = static_cast<int>(a_norm.rows());
  if (k < 1 || k > n) throw std::domain_error("ppr_topk: need 1 <= k <= n");

  // I - (1-alpha) A_norm has eigenvalues in [alpha, 2-alpha]: SPD.
  Eigen::MatrixXd system = Eigen::MatrixXd(a_norm) * -(1.0 - alpha);
  system.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(system);  // factors in place
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("ppr_topk: Cholesky factorization failed");
  }

  PprTable table;
  table.indices.resize(n, k);
  table.scores.resize(n, k);
  for (int start = 0; start < n; start += block) {
    const int cols = std::min(block, n - start);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, cols);
    for (int c = 0; c < cols; ++c) rhs(start + c, c) = alpha;
    llt.solveInPlace(rhs);
    for (int c = 0; c < cols; ++c) {
      // Column start+c of the PPR matrix equals row start+c by symmetry.
      topk_into(rhs.col(c), k, start + c, table);
    }
  }
  return table;
}

}  // namespace dgnn

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dgnn {

// Per-node top-k personalized PageRank neighbors, scores non-increasing
// within a row, ties broken toward the smaller node index.
struct PprTable {
  Eigen::MatrixXi indices;  // n x k
  Eigen::MatrixXd scores;   // n x k
  int n() const { return static_cast<int>(indices.rows()); }
  int k() const { return static_cast<int>(indices.cols()); }
  void validate() const;
};

// Dense personalized PageRank matrix: alpha (I - (1-alpha) A_norm)^{-1}.
Eigen::MatrixXd ppr_exact(const Eigen::MatrixXd& a_norm, double alpha);

// Row-wise top-k of a dense PPR matrix.
PprTable topk_neighbors(const Eigen::MatrixXd& ppr, int k);

// Same result without materializing the full n x n matrix: Cholesky-factor
// the (symmetric positive definite) system once, then solve for column
// blocks. Columns equal rows here because A_norm is symmetric.
PprTable ppr_topk(const Eigen::SparseMatrix<double>& a_norm, double alpha, int k,
                  int block = 512);

}  // namespace dgnn

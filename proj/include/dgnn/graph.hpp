#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "dgnn/rng.hpp"

namespace dgnn {

// Undirected attributed graph with optional labels and split masks.
// Adjacency is stored as sorted neighbor lists; no self-loops.
struct Graph {
  int n_nodes = 0;
  std::vector<std::vector<int>> neighbors;
  Eigen::MatrixXd attributes;            // n_nodes x n_attrs
  Eigen::VectorXi labels;                // -1 where unlabeled
  std::vector<std::uint8_t> train_mask;  // labeled training nodes
  std::vector<std::uint8_t> test_mask;

  int num_attrs() const { return static_cast<int>(attributes.cols()); }
  int num_classes() const;  // 1 + max label
  long num_edges() const;
  bool has_edge(int a, int b) const;
  void add_edge(int a, int b);  // idempotent, keeps lists sorted
  void validate() const;
};

// Two-community-parameter stochastic block model with Gaussian class
// attributes, min-max normalized to [0, 1] per attribute dimension.
// Equal-size communities; n must be divisible by n_classes.
Graph generate_sbm(int n, int n_classes, double p, double q,
                   const Eigen::MatrixXd& attr_means, double attr_sigma, std::uint64_t seed);

// Convenience spec: 3 classes, 3-d attributes with one-hot-leaning means.
Eigen::MatrixXd default_sbm_means(int n_classes, double base, double separation);

// Mark `per_class` random labeled training nodes per class; everything else
// becomes test. Masks are rewritten in place.
void assign_split_per_class(Graph& graph, int per_class, std::uint64_t seed);

// Randomly select `test_count` test nodes; the rest are labeled training.
void assign_split_test_count(Graph& graph, int test_count, std::uint64_t seed);

// Symmetric normalized adjacency with self-loops:
//   (D+I)^{-1/2} (A+I) (D+I)^{-1/2}
Eigen::SparseMatrix<double> normalized_adjacency(const Graph& graph);
Eigen::MatrixXd normalized_adjacency_dense(const Graph& graph);

// Inductive split: test nodes and their incident edges removed from the
// training graph; `train_to_full` maps new ids back to the original graph.
struct InductiveSplit {
  Graph train_graph;
  std::vector<int> train_to_full;
};
InductiveSplit make_inductive(const Graph& graph, const std::vector<int>& test_ids);

}  // namespace dgnn

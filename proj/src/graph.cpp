#include "dgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgnn {

int Graph::num_classes() const {
  int c = 0;
  for (int i = 0; i < labels.size(); ++i) c = std::max(c, labels(i) + 1);
  return c;
}

long Graph::num_edges() const {
  long twice = 0;
  for (const auto& adj : neighbors) twice += static_cast<long>(adj.size());
  return twice / 2;
}

bool Graph::has_edge(int a, int b) const {
  const auto& adj = neighbors[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

void Graph::add_edge(int a, int b) {
  if (a == b) return;
  if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes) {
    throw std::out_of_range("add_edge: node id out of range");
  }
  auto insert_sorted = [](std::vector<int>& adj, int v) {
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) adj.insert(it, v);
  };
  insert_sorted(neighbors[a], b);
  insert_sorted(neighbors[b], a);
}

void Graph::validate() const {
  if (static_cast<int>(neighbors.size()) != n_nodes) {
    throw std::invalid_argument("graph: neighbor list count != n_nodes");
  }
  for (int i = 0; i < n_nodes; ++i) {
    for (int j : neighbors[i]) {
      if (j < 0 || j >= n_nodes) throw std::invalid_argument("graph: neighbor id out of range");
      if (j == i) throw std::invalid_argument("graph: self-loop stored");
      if (!has_edge(j, i)) throw std::invalid_argument("graph: adjacency not symmetric");
    }
  }
  if (!train_mask.empty() && !test_mask.empty()) {
    for (int i = 0; i < n_nodes; ++i) {
      if (train_mask[i] && test_mask[i]) throw std::invalid_argument("graph: masks overlap");
    }
  }
}

Eigen::MatrixXd default_sbm_means(int n_classes, double base, double separation) {
  Eigen::MatrixXd means = Eigen::MatrixXd::Constant(n_classes, n_classes, base);
  for (int c = 0; c < n_classes; ++c) means(c, c) = base + separation;
  return means;
}

Graph generate_sbm(int n, int n_classes, double p, double q,
                   const Eigen::MatrixXd& attr_means, double attr_sigma, std::uint64_t seed) {
  if (!(q >= 0.0 && p >= q && p <= 1.0)) {
    throw std::domain_error("generate_sbm: need 0 <= q <= p <= 1");
  }
  if (n_classes < 1 || n % n_classes != 0) {
    throw std::domain_error("generate_sbm: n must be divisible by n_classes");
  }
  if (attr_means.rows() != n_classes) {
    throw std::invalid_argument("generate_sbm: one mean row per class required");
  }

  Graph g;
  g.n_nodes = n;
  g.neighbors.resize(n);
  g.labels.resize(n);
  const int per_class = n / n_classes;
  for (int i = 0; i < n; ++i) g.labels(i) = i / per_class;

  Rng base(seed);
  Rng edge_rng = base.fork(1);
  Rng attr_rng = base.fork(2);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double prob = (g.labels(i) == g.labels(j)) ? p : q;
      if (edge_rng.bernoulli(prob)) g.add_edge(i, j);
    }
  }

  const int d = static_cast<int>(attr_means.cols());
  g.attributes.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < d; ++a) {
      g.attributes(i, a) = attr_rng.normal(attr_means(g.labels(i), a), attr_sigma);
    }
  }
  // Min-max normalize each attribute dimension into [0, 1].
  for (int a = 0; a < d; ++a) {
    const double lo = g.attributes.col(a).minCoeff();
    const double hi = g.attributes.col(a).maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;
    g.attributes.col(a) = (g.attributes.col(a).array() - lo) / span;
  }

  g.train_mask.assign(n, 0);
  g.test_mask.assign(n, 0);
  return g;
}

void assign_split_per_class(Graph& graph, int per_class, std::uint64_t seed) {
  const int c_count = graph.num_classes();
  graph.train_mask.assign(graph.n_nodes, 0);
  graph.test_mask.assign(graph.n_nodes, 0);
  Rng pick(mix_u64(seed));
  for (int c = 0; c < c_count; ++c) {
    std::vector<int> members;
    for (int i = 0; i < graph.n_nodes; ++i) {
      if (graph.labels(i) == c) members.push_back(i);
    }
    if (static_cast<int>(members.size()) < per_class) {
      throw std::domain_error("assign_split_per_class: class smaller than requested labels");
    }
    pick.shuffle(members);
    for (int t = 0; t < per_class; ++t) graph.train_mask[members[t]] = 1;
  }
  for (int i = 0; i < graph.n_nodes; ++i) {
    if (!graph.train_mask[i]) graph.test_mask[i] = 1;
  }
}

void assign_split_test_count(Graph& graph, int test_count, std::uint64_t seed) {
  if (test_count < 0 || test_count > graph.n_nodes) {
    throw std::domain_error("assign_split_test_count: invalid test count");
  }
  graph.train_mask.assign(graph.n_nodes, 0);
  graph.test_mask.assign(graph.n_nodes, 0);
  std::vector<int> ids(graph.n_nodes);
  for (int i = 0; i < graph.n_nodes; ++i) ids[i] = i;
  Rng rng(mix_u64(seed));
  rng.shuffle(ids);
  for (int t = 0; t < test_count; ++t) graph.test_mask[ids[t]] = 1;
  for (int i = 0; i < graph.n_nodes; ++i) {
    if (!graph.test_mask[i]) graph.train_mask[i] = 1;
  }
}

Eigen::SparseMatrix<double> normalized_adjacency(const Graph& graph) {
  const int n = graph.n_nodes;
  Eigen::VectorXd inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(graph.neighbors[i].size()) + 1.0);
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(graph.num_edges()) * 2 + n);
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, inv_sqrt(i) * inv_sqrt(i));  // self-loop
    for (int j : graph.neighbors[i]) {
      trips.emplace_back(i, j, inv_sqrt(i) * inv_sqrt(j));
    }
  }
  Eigen::SparseMatrix<double> a_norm(n, n);
  a_norm.setFromTriplets(trips.begin(), trips.end());
  return a_norm;
}

Eigen::MatrixXd normalized_adjacency_dense(const Graph& graph) {
  return Eigen::MatrixXd(normalized_adjacency(graph));
}

InductiveSplit make_inductive(const Graph& graph, const std::vector<int>& test_ids) {
  std::vector<std::uint8_t> removed(graph.n_nodes, 0);
  for (int id : test_ids) {
    if (id < 0 || id >= graph.n_nodes) {
      throw std::domain_error("make_inductive: unknown node id " + std::to_string(id));
    }
    removed[id] = 1;
  }

  InductiveSplit split;
  std::vector<int> full_to_train(graph.n_nodes, -1);
  for (int i = 0; i < graph.n_nodes; ++i) {
    if (!removed[i]) {
      full_to_train[i] = static_cast<int>(split.train_to_full.size());
      split.train_to_full.push_back(i);
    }
  }

  Graph& t = split.train_graph;
  t.n_nodes = static_cast<int>(split.train_to_full.size());
  t.neighbors.resize(t.n_nodes);
  t.attributes.resize(t.n_nodes, graph.attributes.cols());
  t.labels.resize(t.n_nodes);
  t.train_mask.assign(t.n_nodes, 0);
  t.test_mask.assign(t.n_nodes, 0);
  for (int i = 0; i < t.n_nodes; ++i) {
    const int orig = split.train_to_full[i];
    t.attributes.row(i) = graph.attributes.row(orig);
    t.labels(i) = graph.labels(orig);
    if (!graph.train_mask.empty()) t.train_mask[i] = graph.train_mask[orig];
    for (int j : graph.neighbors[orig]) {
      if (!removed[j]) t.neighbors[i].push_back(full_to_train[j]);
    }
    std::sort(t.neighbors[i].begin(), t.neighbors[i].end());
  }
  return split;
}

}  // namespace dgnn

#pragma once

// Exact discrete optimal transport: Wasserstein pq-metrics as the
// optimization of the weighted category of couplings.
//
// solve_transport runs the transportation simplex on the complete bipartite
// graph: north-west-corner start, smallest-index (Bland) pricing and ratio
// ties, supplies perturbed by (i+1) * 1e-13 to keep every basis
// nondegenerate. The perturbation is removed on exit by re-solving the
// final spanning tree with the original supplies.
//
// Infinite costs never enter the arithmetic. Each cell is priced by the
// pair (infinite?, c^k) compared lexicographically, which is the big-M
// method with M taken to infinity: mass is moved onto an infinite cell only
// when every feasible plan needs one, and then the value is inf.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlens/errors.hpp"
#include "wlens/extended.hpp"
#include "wlens/prob.hpp"
#include "wlens/wcat.hpp"

namespace wlens {

template <typename Scalar>
struct BasicTransportSolution {
  BasicCoupling<Scalar> plan;
  Scalar value;
  int iterations = 0;
  /// Every feasible plan charges an infinite-cost pair.
  bool infinite = false;
};

using TransportSolution = BasicTransportSolution<double>;

namespace detail {

template <typename Scalar>
struct LexCost {
  Scalar infinite = 0;  // integer valued: count of infinite cells, signed
  Scalar finite = 0;

  LexCost operator+(const LexCost& o) const {
    return {infinite + o.infinite, finite + o.finite};
  }
  LexCost operator-(const LexCost& o) const {
    return {infinite - o.infinite, finite - o.finite};
  }
};

/// Supplies and demands as raw vectors; no probability normalization.
template <typename Scalar>
class TransportSimplex {
 public:
  TransportSimplex(Vector<Scalar> supply, Vector<Scalar> demand,
                   const Matrix<Scalar>& cost, int k)
      : n_(supply.size()),
        m_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(static_cast<std::size_t>(n_ * m_)) {
    Scalar largest(0);
    for (Index i = 0; i < n_; ++i)
      for (Index j = 0; j < m_; ++j) {
        const Scalar c = cost(i, j);
        const Scalar ck = is_inf(c) ? c : (k == 1 ? c : std::pow(c, k));
        if (is_inf(ck)) {
          cell_cost(i, j) = {Scalar(1), Scalar(0)};
        } else {
          cell_cost(i, j) = {Scalar(0), ck};
          largest = std::max(largest, ck);
        }
      }
    price_tol_ = Scalar(1e-12) * (Scalar(1) + largest);
  }

  void run() {
    north_west_corner();
    const int cap = 1000 + 50 * static_cast<int>(n_ * m_);
    while (pivot()) {
      if (++iterations_ > cap)
        throw std::runtime_error("transport simplex: iteration cap exceeded");
    }
    resolve_unperturbed();
  }

  const Matrix<Scalar>& flow() const { return flow_; }
  int iterations() const { return iterations_; }
  bool is_infinite_cell(Index i, Index j) const {
    return cell_cost(i, j).infinite > Scalar(0);
  }

 private:
  struct Cell {
    Index row, col;
  };

  Index node_of_col(Index j) const { return n_ + j; }

  LexCost<Scalar>& cell_cost(Index i, Index j) {
    return cost_[static_cast<std::size_t>(i * m_ + j)];
  }
  const LexCost<Scalar>& cell_cost(Index i, Index j) const {
    return cost_[static_cast<std::size_t>(i * m_ + j)];
  }

  void north_west_corner() {
    Vector<Scalar> a(n_), b = demand_;
    Scalar extra(0);
    for (Index i = 0; i < n_; ++i) {
      const Scalar eps = Scalar(i + 1) * Scalar(1e-13);
      a(i) = supply_(i) + eps;
      extra += eps;
    }
    b(m_ - 1) += extra;
    flow_ = Matrix<Scalar>::Zero(n_, m_);
    basic_.assign(static_cast<std::size_t>(n_ * m_), false);
    basis_.clear();
    Index i = 0, j = 0;
    while (true) {
      const Scalar x = std::min(a(i), b(j));
      flow_(i, j) = x;
      a(i) -= x;
      b(j) -= x;
      add_basic(i, j);
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1)
        ++j;
      else if (j == m_ - 1)
        ++i;
      else if (a(i) <= b(j))
        ++i;
      else
        ++j;
    }
  }

  void add_basic(Index i, Index j) {
    basic_[static_cast<std::size_t>(i * m_ + j)] = true;
    basis_.push_back({i, j});
  }

  /// Tree adjacency: node -> list of basis positions.
  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(
        static_cast<std::size_t>(n_ + m_));
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj[static_cast<std::size_t>(basis_[e].row)].push_back(e);
      adj[static_cast<std::size_t>(node_of_col(basis_[e].col))].push_back(e);
    }
    return adj;
  }

  Index other_end(std::size_t e, Index node) const {
    const Index r = basis_[e].row, c = node_of_col(basis_[e].col);
    return node == r ? c : r;
  }

  bool negative(const LexCost<Scalar>& d) const {
    if (d.infinite < Scalar(-0.5)) return true;
    if (d.infinite > Scalar(0.5)) return false;
    return d.finite < -price_tol_;
  }

  /// One simplex step; false when the basis is optimal.
  bool pivot() {
    const auto adj = adjacency();
    // potentials: cost(i, j) = u(i) + v(j) on basic cells, u(0) = 0
    std::vector<LexCost<Scalar>> pot(static_cast<std::size_t>(n_ + m_));
    std::vector<bool> seen(static_cast<std::size_t>(n_ + m_), false);
    std::deque<Index> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const Index node = queue.front();
      queue.pop_front();
      for (std::size_t e : adj[static_cast<std::size_t>(node)]) {
        const Index next = other_end(e, node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = true;
        pot[static_cast<std::size_t>(next)] =
            cell_cost(basis_[e].row, basis_[e].col) -
            pot[static_cast<std::size_t>(node)];
        queue.push_back(next);
      }
    }

    // Bland: first cell in row-major order with negative reduced cost
    Index in_row = -1, in_col = -1;
    for (Index i = 0; i < n_ && in_row < 0; ++i)
      for (Index j = 0; j < m_; ++j) {
        if (basic_[static_cast<std::size_t>(i * m_ + j)]) continue;
        const auto reduced = cell_cost(i, j) - pot[static_cast<std::size_t>(i)] -
                             pot[static_cast<std::size_t>(node_of_col(j))];
        if (negative(reduced)) {
          in_row = i;
          in_col = j;
          break;
        }
      }
    if (in_row < 0) return false;

    // tree path from row node to column node closes the cycle
    std::vector<std::ptrdiff_t> parent(static_cast<std::size_t>(n_ + m_), -1);
    std::vector<bool> visited(static_cast<std::size_t>(n_ + m_), false);
    queue.assign({in_row});
    visited[static_cast<std::size_t>(in_row)] = true;
    const Index goal = node_of_col(in_col);
    while (!queue.empty() && !visited[static_cast<std::size_t>(goal)]) {
      const Index node = queue.front();
      queue.pop_front();
      for (std::size_t e : adj[static_cast<std::size_t>(node)]) {
        const Index next = other_end(e, node);
        if (visited[static_cast<std::size_t>(next)]) continue;
        visited[static_cast<std::size_t>(next)] = true;
        parent[static_cast<std::size_t>(next)] = static_cast<std::ptrdiff_t>(e);
        queue.push_back(next);
      }
    }
    std::vector<std::size_t> path;  // from the column end back to the row
    for (Index node = goal; node != in_row;) {
      const auto e = static_cast<std::size_t>(parent[static_cast<std::size_t>(node)]);
      path.push_back(e);
      node = other_end(e, node);
    }

    // even positions lose flow, odd positions gain
    Scalar theta = kInf<Scalar>;
    for (std::size_t t = 0; t < path.size(); t += 2)
      theta = std::min(theta, flow_(basis_[path[t]].row, basis_[path[t]].col));
    std::size_t leaving = path.size();
    Index leaving_key = n_ * m_;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const Cell c = basis_[path[t]];
      const Index key = c.row * m_ + c.col;
      if (flow_(c.row, c.col) <= theta && key < leaving_key) {
        leaving = t;
        leaving_key = key;
      }
    }
    for (std::size_t t = 0; t < path.size(); ++t) {
      const Cell c = basis_[path[t]];
      flow_(c.row, c.col) += (t % 2 == 0) ? -theta : theta;
    }
    flow_(in_row, in_col) = theta;
    const Cell out = basis_[path[leaving]];
    flow_(out.row, out.col) = Scalar(0);
    basic_[static_cast<std::size_t>(out.row * m_ + out.col)] = false;
    basis_[path[leaving]] = {in_row, in_col};
    basic_[static_cast<std::size_t>(in_row * m_ + in_col)] = true;
    return true;
  }

  /// Flows of the final tree for the unperturbed supplies, by peeling leaves.
  void resolve_unperturbed() {
    const auto adj = adjacency();
    const auto nodes = static_cast<std::size_t>(n_ + m_);
    std::vector<Scalar> rest(nodes);
    for (Index i = 0; i < n_; ++i) rest[static_cast<std::size_t>(i)] = supply_(i);
    for (Index j = 0; j < m_; ++j)
      rest[static_cast<std::size_t>(node_of_col(j))] = demand_(j);
    std::vector<int> degree(nodes);
    for (std::size_t v = 0; v < nodes; ++v) degree[v] = static_cast<int>(adj[v].size());
    std::vector<bool> done(basis_.size(), false);
    std::deque<Index> leaves;
    for (std::size_t v = 0; v < nodes; ++v)
      if (degree[v] == 1) leaves.push_back(static_cast<Index>(v));
    flow_.setZero();
    while (!leaves.empty()) {
      const Index v = leaves.front();
      leaves.pop_front();
      if (degree[static_cast<std::size_t>(v)] != 1) continue;
      std::size_t edge = basis_.size();
      for (std::size_t e : adj[static_cast<std::size_t>(v)])
        if (!done[e]) edge = e;
      const Index w = other_end(edge, v);
      const Scalar x = rest[static_cast<std::size_t>(v)];
      flow_(basis_[edge].row, basis_[edge].col) = std::max(x, Scalar(0));
      rest[static_cast<std::size_t>(w)] -= x;
      done[edge] = true;
      --degree[static_cast<std::size_t>(v)];
      if (--degree[static_cast<std::size_t>(w)] == 1) leaves.push_back(w);
    }
  }

  Index n_, m_;
  Vector<Scalar> supply_, demand_;
  std::vector<LexCost<Scalar>> cost_;
  Scalar price_tol_{};
  Matrix<Scalar> flow_;
  std::vector<bool> basic_;
  std::vector<Cell> basis_;
  int iterations_ = 0;
};

template <typename Scalar>
void require_transport_shapes(const BasicMeasure<Scalar>& p,
                              const BasicMeasure<Scalar>& q,
                              const Matrix<Scalar>& cost) {
  if (cost.rows() != p.size() || cost.cols() != q.size())
    throw StructuralError("transport: cost matrix is " +
                          std::to_string(cost.rows()) + "x" +
                          std::to_string(cost.cols()) + ", measures need " +
                          std::to_string(p.size()) + "x" +
                          std::to_string(q.size()));
  for (Index i = 0; i < cost.rows(); ++i)
    for (Index j = 0; j < cost.cols(); ++j)
      if (!is_ext_nonneg(cost(i, j)))
        throw StructuralError("transport: negative or NaN cost");
}

template <typename Scalar>
void require_balanced(const Vector<Scalar>& supply,
                      const Vector<Scalar>& demand) {
  for (Index i = 0; i < supply.size(); ++i)
    if (!(supply(i) >= Scalar(0)))
      throw InfeasibleError("transport: negative supply");
  for (Index j = 0; j < demand.size(); ++j)
    if (!(demand(j) >= Scalar(0)))
      throw InfeasibleError("transport: negative demand");
  const Scalar gap = supply.sum() - demand.sum();
  if (std::abs(gap) > Scalar(2) * kMassTol<Scalar>)
    throw InfeasibleError("transport: total masses differ by " +
                          format_number(double(gap)));
}

}  // namespace detail

/// Minimum of cost_k over all couplings of p and q, with an attaining plan.
template <typename Scalar>
BasicTransportSolution<Scalar> solve_transport(const BasicMeasure<Scalar>& p,
                                               const BasicMeasure<Scalar>& q,
                                               const Matrix<Scalar>& cost,
                                               int k) {
  if (k < 1) throw ArgumentError("transport: k must be an integer >= 1");
  detail::require_transport_shapes(p, q, cost);
  detail::require_balanced(p.mass(), q.mass());

  detail::TransportSimplex<Scalar> simplex(p.mass(), q.mass(), cost, k);
  simplex.run();
  Matrix<Scalar> joint = simplex.flow();
  bool infinite = false;
  for (Index i = 0; i < joint.rows(); ++i)
    for (Index j = 0; j < joint.cols(); ++j) {
      if (!simplex.is_infinite_cell(i, j) || joint(i, j) == Scalar(0)) continue;
      if (joint(i, j) <= kMassTol<Scalar>)
        joint(i, j) = Scalar(0);  // rounding residue of a zero flow
      else
        infinite = true;
    }
  BasicCoupling<Scalar> plan(p, q, std::move(joint));
  const Scalar value = cost_k(plan, cost, k);
  return {std::move(plan), value, simplex.iterations(), infinite};
}

template <typename Scalar>
Scalar wasserstein(const BasicMeasure<Scalar>& p, const BasicMeasure<Scalar>& q,
                   const Matrix<Scalar>& cost, int k) {
  return solve_transport(p, q, cost, k).value;
}

inline constexpr Index kBruteForceMaxPoints = 6;

/// Test oracle: minimum of sum c^k s over every vertex of the transportation
/// polytope, found by enumerating all spanning trees of the complete
/// bipartite graph on the supports. Exponential; refuses supports of more
/// than six points on either side.
template <typename Scalar>
Scalar brute_force_wasserstein(const BasicMeasure<Scalar>& p,
                               const BasicMeasure<Scalar>& q,
                               const Matrix<Scalar>& cost, int k) {
  if (k < 1) throw ArgumentError("brute force: k must be an integer >= 1");
  detail::require_transport_shapes(p, q, cost);
  detail::require_balanced(p.mass(), q.mass());

  std::vector<Index> rows, cols;
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > Scalar(0)) rows.push_back(i);
  for (Index j = 0; j < q.size(); ++j)
    if (q(j) > Scalar(0)) cols.push_back(j);
  if (static_cast<Index>(rows.size()) > kBruteForceMaxPoints ||
      static_cast<Index>(cols.size()) > kBruteForceMaxPoints)
    throw SizeLimitError("brute force: at most 6 support points per side");
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(cols.size());
  const int nodes = nr + nc;
  const int needed = nodes - 1;

  struct Edge {
    int r, c;  // local indices; column node is nr + c
  };
  std::vector<Edge> edges;
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) edges.push_back({r, c});

  auto power = [&](Scalar c) { return k == 1 ? c : std::pow(c, k); };

  // union-find with rollback: union by size, no path compression
  std::vector<int> parent(static_cast<std::size_t>(nodes)), size(parent.size(), 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };

  std::vector<int> chosen;
  Scalar best = kInf<Scalar>;

  auto evaluate = [&] {
    // peel leaves of the tree to get the unique flow it supports
    std::vector<Scalar> rest(static_cast<std::size_t>(nodes));
    for (int r = 0; r < nr; ++r) rest[static_cast<std::size_t>(r)] = p(rows[static_cast<std::size_t>(r)]);
    for (int c = 0; c < nc; ++c) rest[static_cast<std::size_t>(nr + c)] = q(cols[static_cast<std::size_t>(c)]);
    std::vector<int> degree(static_cast<std::size_t>(nodes), 0);
    for (int e : chosen) {
      ++degree[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].r)];
      ++degree[static_cast<std::size_t>(nr + edges[static_cast<std::size_t>(e)].c)];
    }
    std::vector<bool> used(chosen.size(), false);
    Scalar total(0);
    for (std::size_t step = 0; step < chosen.size(); ++step) {
      std::size_t pick = chosen.size();
      int leaf = -1;
      for (std::size_t t = 0; t < chosen.size() && pick == chosen.size(); ++t) {
        if (used[t]) continue;
        const Edge& e = edges[static_cast<std::size_t>(chosen[t])];
        if (degree[static_cast<std::size_t>(e.r)] == 1) {
          pick = t;
          leaf = e.r;
        } else if (degree[static_cast<std::size_t>(nr + e.c)] == 1) {
          pick = t;
          leaf = nr + e.c;
        }
      }
      const Edge& e = edges[static_cast<std::size_t>(chosen[pick])];
      const int other = leaf == e.r ? nr + e.c : e.r;
      const Scalar x = rest[static_cast<std::size_t>(leaf)];
      if (x < -kMassTol<Scalar>) return;  // infeasible vertex
      rest[static_cast<std::size_t>(other)] -= x;
      used[pick] = true;
      --degree[static_cast<std::size_t>(leaf)];
      --degree[static_cast<std::size_t>(other)];
      if (x > kMassTol<Scalar>) {
        const Scalar c = cost(rows[static_cast<std::size_t>(e.r)], cols[static_cast<std::size_t>(e.c)]);
        if (is_inf(c)) {
          total = kInf<Scalar>;
        } else if (!is_inf(total)) {
          total += power(c) * x;
        }
      } else if (x > Scalar(0)) {
        const Scalar c = cost(rows[static_cast<std::size_t>(e.r)], cols[static_cast<std::size_t>(e.c)]);
        if (!is_inf(c) && !is_inf(total)) total += power(c) * x;
      }
    }
    best = std::min(best, total);
  };

  std::function<void(int)> search = [&](int next) {
    if (static_cast<int>(chosen.size()) == needed) {
      evaluate();
      return;
    }
    if (static_cast<int>(edges.size()) - next <
        needed - static_cast<int>(chosen.size()))
      return;
    // include edges[next] when it joins two components
    const Edge& e = edges[static_cast<std::size_t>(next)];
    int a = find(e.r), b = find(nr + e.c);
    if (a != b) {
      if (size[static_cast<std::size_t>(a)] < size[static_cast<std::size_t>(b)]) std::swap(a, b);
      parent[static_cast<std::size_t>(b)] = a;
      size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
      chosen.push_back(next);
      search(next + 1);
      chosen.pop_back();
      size[static_cast<std::size_t>(a)] -= size[static_cast<std::size_t>(b)];
      parent[static_cast<std::size_t>(b)] = b;
    }
    search(next + 1);
  };
  search(0);

  if (is_inf(best)) return best;
  return k == 1 ? best : std::pow(best, Scalar(1) / Scalar(k));
}

/// Pairwise Wasserstein distances: Opt of the coupling category restricted
/// to the given measures. Points are named by `names` or m0, m1, ...
template <typename Scalar>
PQMetric optimal_pq_metric(std::span<const BasicMeasure<Scalar>> measures,
                           const Matrix<Scalar>& cost, int k,
                           std::vector<std::string> names = {}) {
  const Index n = static_cast<Index>(measures.size());
  if (names.empty())
    for (Index i = 0; i < n; ++i) names.push_back("m" + std::to_string(i));
  if (static_cast<Index>(names.size()) != n)
    throw StructuralError("optimal_pq_metric: one name per measure required");
  for (Index i = 1; i < n; ++i)
    if (!same_space(measures[0].space(), measures[static_cast<std::size_t>(i)].space()))
      throw StructuralError("optimal_pq_metric: measures on different spaces");
  PQMetric out{std::move(names), Matrix<double>::Zero(n, n)};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      out.dist(i, j) = static_cast<double>(
          wasserstein(measures[static_cast<std::size_t>(i)],
                      measures[static_cast<std::size_t>(j)], cost, k));
  return out;
}

/// Optimization-completeness of the coupling category, checked through the
/// solver: for every ordered pair the returned plan is a coupling of the
/// pair whose own k-cost equals the reported infimum.
template <typename Scalar>
CompletenessReport check_optimization_complete(
    std::span<const BasicMeasure<Scalar>> measures, const Matrix<Scalar>& cost,
    int k, Scalar tol = Scalar(1e-9)) {
  CompletenessReport out;
  for (const auto& p : measures)
    for (const auto& q : measures) {
      const auto sol = solve_transport(p, q, cost, k);
      if (!ext_near(cost_k(sol.plan, cost, k), sol.value, tol))
        out.complete = false;
    }
  return out;
}

}  // namespace wlens

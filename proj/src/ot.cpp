#include "swae/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swae/errors.hpp"
#include "swae/kernels.hpp"

namespace swae::ot {

EmpiricalDistribution::EmpiricalDistribution(Tensor atoms_) : atoms(std::move(atoms_)) {
  if (atoms.rank() != 2) throw DimensionError("empirical distribution atoms must be a matrix");
  require_finite(atoms, "empirical distribution atoms");
}

double assignment_cost(const Tensor& cost, const std::vector<std::size_t>& permutation) {
  const std::size_t n = permutation.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += cost(i, permutation[i]);
  return sum / static_cast<double>(n);
}

Assignment min_cost_assignment(const Tensor& cost) {
  if (cost.rank() != 2 || cost.rows() != cost.cols()) {
    throw DimensionError("min_cost_assignment: cost matrix must be square, got " +
                         cost.shape_string());
  }
  const std::size_t n = cost.rows();
  if (n > kMaxAssignmentSize) {
    throw DimensionError("min_cost_assignment: n = " + std::to_string(n) + " exceeds " +
                         std::to_string(kMaxAssignmentSize));
  }
  require_finite(cost, "min_cost_assignment");

  // Rows are added one at a time; each addition runs a Dijkstra-like search
  // over reduced costs C[i][j] − row_pot[i] − col_pot[j] for a shortest
  // augmenting path. Index 0 is a virtual column, real columns are 1..n.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<std::size_t> col_owner(n + 1, 0), prev_col(n + 1, 0);
  std::vector<double> slack(n + 1);
  std::vector<char> visited(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    col_owner[0] = row;
    std::size_t col = 0;
    std::fill(slack.begin(), slack.end(), inf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[col] = 1;
      const std::size_t r = col_owner[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const double reduced = cost(r - 1, j - 1) - row_pot[r] - col_pot[j];
        if (reduced < slack[j]) {
          slack[j] = reduced;
          prev_col[j] = col;
        }
        if (slack[j] < delta) {
          delta = slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_pot[col_owner[j]] += delta;
          col_pot[j] -= delta;
        } else {
          slack[j] -= delta;
        }
      }
      col = next;
    } while (col_owner[col] != 0);
    // Flip the augmenting path.
    do {
      const std::size_t p = prev_col[col];
      col_owner[col] = col_owner[p];
      col = p;
    } while (col != 0);
  }

  Assignment a;
  a.permutation.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) a.permutation[col_owner[j] - 1] = j - 1;
  a.cost = assignment_cost(cost, a.permutation);
  return a;
}

double empirical_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                             int p) {
  if (p != 1 && p != 2) throw ConfigError("empirical_wasserstein: p must be 1 or 2");
  if (a.size() != b.size()) {
    throw SizeError("empirical_wasserstein: atom counts differ (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  if (a.dim() != b.dim()) throw DimensionError("empirical_wasserstein: atom dimensions differ");
  const std::size_t n = a.size();
  const std::size_t d = a.dim();
  Tensor cost = Tensor::matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sq = kernels::squared_distance(a.atoms.row(i).data(), b.atoms.row(j).data(), d);
      cost(i, j) = p == 2 ? sq : std::sqrt(sq);
    }
  }
  const double c = min_cost_assignment(cost).cost;
  return p == 2 ? std::sqrt(c) : c;
}

namespace {

double lp_power(double diff, int p) { return p == 2 ? diff * diff : std::pow(std::abs(diff), p); }

}  // namespace

JointCostCheck verify_theorem1(const Tensor& x_atoms, const Tensor& z_atoms,
                               const VectorMap& encoder, const VectorMap& decoder, int p,
                               const JointCostOptions& options) {
  if (p < 1) throw ConfigError("verify_theorem1: p must be at least 1");
  if (x_atoms.rank() != 2 || z_atoms.rank() != 2) {
    throw DimensionError("verify_theorem1: atoms must be matrices");
  }
  const std::size_t n = x_atoms.rows();
  if (z_atoms.rows() != n) throw DimensionError("verify_theorem1: atom counts differ");
  const std::size_t dx = x_atoms.cols();
  const std::size_t dz = z_atoms.cols();

  const Tensor z_e = encoder(x_atoms);
  const Tensor x_d = decoder(z_atoms);
  require_matrix(z_e, dz, "verify_theorem1 encoder output");
  require_matrix(x_d, dx, "verify_theorem1 decoder output");
  if (z_e.rows() != n || x_d.rows() != n) {
    throw DimensionError("verify_theorem1: maps must keep the atom count");
  }

  // Joint route: e_i = (x_i, E(x_i)) and d_j = (D(z_j), z_j) as single vectors.
  Tensor enc_joint = Tensor::matrix(n, dx + dz);
  Tensor dec_joint = Tensor::matrix(n, dx + dz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < dx; ++c) {
      enc_joint(i, c) = x_atoms(i, c);
      dec_joint(i, c) = x_d(i, c);
    }
    for (std::size_t c = 0; c < dz; ++c) {
      enc_joint(i, dx + c) = z_e(i, c);
      dec_joint(i, dx + c) = z_atoms(i, c);
    }
  }
  Tensor joint_cost = Tensor::matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dx + dz; ++c) s += lp_power(enc_joint(i, c) - dec_joint(j, c), p);
      joint_cost(i, j) = s;
    }
  }

  // Split route: x-loss ‖x_i − D(z_j)‖ plus z-loss ‖E(x_i) − z_j‖.
  Tensor x_term = Tensor::matrix(n, n);
  Tensor z_term = Tensor::matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sx = 0.0;
      for (std::size_t c = 0; c < dx; ++c) sx += lp_power(x_atoms(i, c) - x_d(j, c), p);
      double sz = 0.0;
      for (std::size_t c = 0; c < dz; ++c) sz += lp_power(z_e(i, c) - z_atoms(j, c), p);
      x_term(i, j) = sx;
      z_term(i, j) = sz;
    }
  }
  Tensor split_cost = Tensor::matrix(n, n);
  for (std::size_t i = 0; i < split_cost.size(); ++i) {
    split_cost[i] = x_term[i] + z_term[i] + options.split_perturbation;
  }

  JointCostCheck out;
  out.joint = min_cost_assignment(joint_cost).cost;
  out.split = min_cost_assignment(split_cost).cost;
  out.gap = std::abs(out.joint - out.split);
  return out;
}

}  // namespace swae::ot

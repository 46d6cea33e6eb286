#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "swae/tensor.hpp"

namespace swae::ot {

/// n atoms (rows) with implicit uniform weights 1/n.
struct EmpiricalDistribution {
  Tensor atoms;

  explicit EmpiricalDistribution(Tensor atoms_);
  std::size_t size() const noexcept { return atoms.rows(); }
  std::size_t dim() const noexcept { return atoms.cols(); }
};

/// Row i is matched to column permutation[i]; cost is the mean matched entry.
struct Assignment {
  std::vector<std::size_t> permutation;
  double cost = 0.0;
};

inline constexpr std::size_t kMaxAssignmentSize = 512;

/// Exact minimum of (1/n)·Σ_i C[i, σ(i)] over permutations σ (shortest
/// augmenting paths with dual potentials, O(n³)). Throws DimensionError for a
/// non-square matrix or n > kMaxAssignmentSize, NumericError for NaN/Inf.
Assignment min_cost_assignment(const Tensor& cost);

/// (1/n)·Σ_i C[i, σ(i)] for a given permutation.
double assignment_cost(const Tensor& cost, const std::vector<std::size_t>& permutation);

/// p-Wasserstein distance between equal-size uniform empirical measures with
/// Euclidean ground metric. p ∈ {1, 2}. Throws SizeError for unequal sizes.
double empirical_wasserstein(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                             int p);

using VectorMap = std::function<Tensor(const Tensor&)>;

struct JointCostCheck {
  double joint = 0.0;  // OT cost between the encoding and decoding joints
  double split = 0.0;  // OT cost with the x-loss + z-loss decomposition
  double gap = 0.0;    // |joint − split|
};

/// Test hook: added to every split-cost entry so callers can force a mismatch.
struct JointCostOptions {
  double split_perturbation = 0.0;
};

/// Solves the optimal coupling between the empirical encoding joint
/// {(x_i, E(x_i))} and decoding joint {(D(z_j), z_j)} twice: once on the
/// concatenated (dim_x + dim_z)-vectors, once on the cost split into a
/// data-space and a latent-space term. The two cost matrices are built by
/// separate code. Costs are ‖·‖_p^p (for p = 2 the squared Euclidean norm).
JointCostCheck verify_theorem1(const Tensor& x_atoms, const Tensor& z_atoms,
                               const VectorMap& encoder, const VectorMap& decoder, int p,
                               const JointCostOptions& options = {});

}  // namespace swae::ot

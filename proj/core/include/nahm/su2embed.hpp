#pragma once

#include <array>
#include <vector>

#include "nahm/liealg.hpp"

namespace nahm {

/// Partition of n labelling an su(2) embedding into the target algebra.
/// Reality constraints: for so(N) every even part must occur with even
/// multiplicity, for sp(2k) every odd part must.
struct Partition {
  Family family = Family::su;
  int n = 0;
  std::vector<int> parts;

  Partition() = default;
  Partition(Family f, int n_, std::vector<int> parts_);

  int num_parts() const { return static_cast<int>(parts.size()); }
  std::string str() const;
};

/// Images (t1, t2, t3) of the standard su(2) basis under an embedding,
/// satisfying [t1,t2] = t3 and cyclic.  The zero triple represents the
/// trivial homomorphism.
struct Su2Triple {
  AlgebraPtr algebra;
  std::array<AlgebraElement, 3> t;
  Partition source;

  bool is_zero(double tol = 1e-14) const;
  /// Max norm of [t_a,t_b] - eps_abc t_c over the three relations.
  double commutation_residual() const;
};

struct SpinEntry {
  double j = 0;   // non-negative half-integer
  int mult = 0;   // multiplicity of the spin-j module in the complexification
};

struct SpinDecomposition {
  std::vector<SpinEntry> entries;  // sorted by descending j
  int total_dim = 0;               // sum of mult*(2j+1), equals dim g
};

struct CommutantData {
  std::vector<AlgebraElement> basis;
  int dim = 0;
  int rank = 0;  // rank of the commutant group, from the partition
};

/// t_a = -i J_a for the spin-j irreducible representation, dimension two_j+1.
std::array<Eigen::MatrixXcd, 3> spin_triple_matrices(int two_j);

Su2Triple embed_from_partition(const AlgebraPtr& algebra, const Partition& p);
Su2Triple zero_triple(const AlgebraPtr& algebra);

/// Isotypic decomposition of the adjoint action, computed by diagonalizing
/// the Casimir -sum_a ad(t_a)^2 and clustering eigenvalues to j(j+1).
SpinDecomposition spin_decomposition(const AlgebraPtr& algebra, const Su2Triple& t);

CommutantData commutant(const AlgebraPtr& algebra, const Su2Triple& t);

int commutant_rank_from_partition(const Partition& p);

struct PartitionClass {
  Partition partition;
  bool quasiregular = false;
  bool principal = false;
  int commutant_rank = 0;
};

/// All admissible partitions for the family, with the quasiregular and
/// principal flags and the commutant rank.
std::vector<PartitionClass> classify_partitions(Family family, int n);

Partition principal_partition(Family family, int n);

}  // namespace nahm

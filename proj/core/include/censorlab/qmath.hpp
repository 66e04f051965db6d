#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace censorlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Hard cap on the total Hilbert-space dimension. Superoperators on the
/// largest allowed space are 4096 x 4096, which is the desk-scale limit.
inline constexpr int kDimCap = 64;

/// Default absolute tolerance for state validation (max-entry Hermiticity
/// error, trace error, and minimum-eigenvalue slack).
inline constexpr double kDefaultTol = 1e-9;

/// Ordered list of local Hilbert-space dimensions. The leftmost dimension is
/// the most significant tensor factor: a basis index decomposes as
/// i = i_0 * (d_1 * ... * d_{N-1}) + i_1 * (d_2 * ... * d_{N-1}) + ... + i_{N-1}.
class DimProfile {
 public:
  explicit DimProfile(std::vector<int> dims);
  DimProfile(std::initializer_list<int> dims) : DimProfile(std::vector<int>(dims)) {}

  const std::vector<int>& dims() const { return dims_; }
  int dim(int subsystem) const { return dims_.at(static_cast<std::size_t>(subsystem)); }
  int count() const { return static_cast<int>(dims_.size()); }
  int total() const { return total_; }

  /// Flat-index stride of a subsystem (product of all dimensions to its right).
  int stride(int subsystem) const;

  /// Digit of a flat index belonging to one subsystem.
  int digit(int flat_index, int subsystem) const;

  /// Profiles concatenated left-to-right (joint system of two others).
  static DimProfile concat(const DimProfile& a, const DimProfile& b);

  bool operator==(const DimProfile& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  int total_ = 0;
};

struct DensityDiagnostics {
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;
  double hermitian_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const { return hermitian && unit_trace && positive; }
  /// Names the violated invariant(s), or reports "valid density operator".
  std::string describe() const;
};

/// Hermitian, positive semidefinite, unit-trace operator with a subsystem
/// dimension profile. Validated on construction; immutable afterwards.
class DensityOperator {
 public:
  DensityOperator(Matrix matrix, DimProfile profile, double tolerance = kDefaultTol);

  const Matrix& matrix() const { return matrix_; }
  const DimProfile& profile() const { return profile_; }
  double tolerance() const { return tolerance_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Matrix matrix_;
  DimProfile profile_;
  double tolerance_;
};

struct EigResult {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // column k is the eigenvector of values[k]
};

// ---------------------------------------------------------------------------
// Elementary constructions
// ---------------------------------------------------------------------------

Matrix identity(int dim);

/// Computational-basis column vector |index>.
Vector basis_ket(int dim, int index);

/// Rank-1 diagonal projector |index><index|.
Matrix basis_projector(int dim, int index);

/// Kronecker product; dimensions multiply, left factor most significant.
Matrix kron(const Matrix& a, const Matrix& b);

/// Unitary that reorders tensor factors so that new subsystem k is old
/// subsystem perm[k]. perm must be a permutation of 0..N-1.
Matrix permutation_unitary(const DimProfile& profile, const std::vector<int>& perm);

// ---------------------------------------------------------------------------
// Subsystem operations
// ---------------------------------------------------------------------------

/// Traces out every subsystem not listed in keep. Kept subsystems stay in
/// profile order; keep must be nonempty with valid, distinct indices.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);
Matrix partial_trace(const Matrix& m, const DimProfile& profile, const std::vector<int>& keep);

/// Transposes one tensor factor. Hermiticity and trace are preserved;
/// positivity is not (the PPT criterion lives on exactly this gap).
Matrix partial_transpose(const DensityOperator& rho, int subsystem);
Matrix partial_transpose(const Matrix& m, const DimProfile& profile, int subsystem);

/// Transposes a set of factors at once (composition of single transposes).
Matrix partial_transpose(const Matrix& m, const DimProfile& profile,
                         const std::vector<int>& subsystems);

// ---------------------------------------------------------------------------
// Spectra and metrics
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix: values ascending, eigenvector
/// columns orthonormal. Throws if the input is not Hermitian within tol.
EigResult eig_hermitian(const Matrix& a, double tol = kDefaultTol);

/// (1/2) sum of absolute eigenvalues of rho - sigma; in [0, 1] for states.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const Matrix& a, const Matrix& b);

/// Checks the three density-operator invariants at tol and reports which
/// failed. Never throws for a square finite matrix of matching dimension.
DensityDiagnostics is_density(const Matrix& m, const DimProfile& profile, double tol);

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// Deterministic standard-normal stream: mt19937_64 produces 53-bit uniforms
/// u = (x >> 11) * 2^-53, mapped through Box-Muller
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
/// with u1 shifted into (0, 1]. Same seed, same stream, bit for bit.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

  /// Standard complex Gaussian (z0 + i z1) / sqrt(2), E|g|^2 = 1. Consumes a
  /// whole Box-Muller pair, independent of any cached real draw.
  Complex next_complex();

 private:
  double uniform_closed();  // (0, 1]
  double uniform_open();    // [0, 1)

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Matrix with independent standard complex-Gaussian entries, filled row-major.
Matrix ginibre(int rows, int cols, std::uint64_t seed);

/// Ginibre state G G^dag / Tr(G G^dag); full rank with probability 1.
DensityOperator random_density(int dim, std::uint64_t seed);

/// Haar-ish random pure state (normalized Gaussian vector) as a projector.
DensityOperator random_pure(int dim, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Small numeric helpers shared across modules
// ---------------------------------------------------------------------------

double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization: vec(M)[c * rows + r] = M(r, c).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int rows, int cols);

/// Hilbert-Schmidt inner product Tr(a^dag b).
Complex trace_inner(const Matrix& a, const Matrix& b);

Matrix hermitian_part(const Matrix& m);

}  // namespace censorlab

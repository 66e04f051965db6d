#include "censorlab/qmath.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace censorlab {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

// ---------------------------------------------------------------------------
// DimProfile
// ---------------------------------------------------------------------------

DimProfile::DimProfile(std::vector<int> dims) : dims_(std::move(dims)) {
  require(!dims_.empty(), "DimProfile: dimension list must be nonempty");
  long long total = 1;
  for (int d : dims_) {
    require(d >= 1, "DimProfile: dimensions must be positive");
    total *= d;
    require(total <= kDimCap, "DimProfile: total dimension exceeds cap of " +
                                  std::to_string(kDimCap));
  }
  total_ = static_cast<int>(total);
}

int DimProfile::stride(int subsystem) const {
  require(subsystem >= 0 && subsystem < count(), "DimProfile: invalid subsystem index");
  int s = 1;
  for (int k = subsystem + 1; k < count(); ++k) s *= dims_[static_cast<std::size_t>(k)];
  return s;
}

int DimProfile::digit(int flat_index, int subsystem) const {
  return (flat_index / stride(subsystem)) % dim(subsystem);
}

DimProfile DimProfile::concat(const DimProfile& a, const DimProfile& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DimProfile(std::move(dims));
}

// ---------------------------------------------------------------------------
// DensityDiagnostics / DensityOperator
// ---------------------------------------------------------------------------

std::string DensityDiagnostics::describe() const {
  if (ok()) return "valid density operator";
  std::ostringstream out;
  out << "invalid density operator:";
  if (!hermitian) out << " not Hermitian (max |rho - rho^dag| = " << hermitian_error << ")";
  if (!unit_trace) out << " trace differs from 1 by " << trace_error;
  if (!positive) out << " negative eigenvalue " << min_eigenvalue;
  return out.str();
}

DensityOperator::DensityOperator(Matrix matrix, DimProfile profile, double tolerance)
    : matrix_(std::move(matrix)), profile_(std::move(profile)), tolerance_(tolerance) {
  require(tolerance_ >= 0.0, "DensityOperator: tolerance must be nonnegative");
  require(matrix_.rows() == matrix_.cols(), "DensityOperator: matrix must be square");
  require(matrix_.rows() == profile_.total(),
          "DensityOperator: profile total does not match matrix dimension");
  require(matrix_.allFinite(), "DensityOperator: entries must be finite");
  DensityDiagnostics diag = is_density(matrix_, profile_, tolerance_);
  require(diag.ok(), "DensityOperator: " + diag.describe());
}

// ---------------------------------------------------------------------------
// Elementary constructions
// ---------------------------------------------------------------------------

Matrix identity(int dim) {
  require(dim >= 1, "identity: dim must be positive");
  return Matrix::Identity(dim, dim);
}

Vector basis_ket(int dim, int index) {
  require(dim >= 1, "basis_ket: dim must be positive");
  require(index >= 0 && index < dim, "basis_ket: index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = Complex(1.0, 0.0);
  return v;
}

Matrix basis_projector(int dim, int index) {
  require(dim >= 1, "basis_projector: dim must be positive");
  require(index >= 0 && index < dim, "basis_projector: index out of range");
  Matrix p = Matrix::Zero(dim, dim);
  p(index, index) = Complex(1.0, 0.0);
  return p;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  require(a.size() > 0 && b.size() > 0, "kron: inputs must be nonempty");
  require(a.allFinite() && b.allFinite(), "kron: entries must be finite");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix permutation_unitary(const DimProfile& profile, const std::vector<int>& perm) {
  const int n = profile.count();
  require(static_cast<int>(perm.size()) == n, "permutation_unitary: wrong permutation length");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : perm) {
    require(p >= 0 && p < n, "permutation_unitary: index out of range");
    require(!seen[static_cast<std::size_t>(p)], "permutation_unitary: duplicate index");
    seen[static_cast<std::size_t>(p)] = true;
  }

  // New profile: factor k of the output is factor perm[k] of the input.
  std::vector<int> new_dims(perm.size());
  for (int k = 0; k < n; ++k) new_dims[static_cast<std::size_t>(k)] = profile.dim(perm[k]);
  DimProfile out_profile(new_dims);

  const int d = profile.total();
  Matrix u = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    int m = 0;
    for (int k = 0; k < n; ++k)
      m += profile.digit(j, perm[k]) * out_profile.stride(k);
    u(m, j) = Complex(1.0, 0.0);
  }
  return u;
}

// ---------------------------------------------------------------------------
// Subsystem operations
// ---------------------------------------------------------------------------

Matrix partial_trace(const Matrix& m, const DimProfile& profile, const std::vector<int>& keep) {
  require(m.rows() == m.cols(), "partial_trace: matrix must be square");
  require(m.rows() == profile.total(), "partial_trace: profile does not match matrix");
  require(!keep.empty(), "partial_trace: keep set must be nonempty");
  std::vector<bool> kept(static_cast<std::size_t>(profile.count()), false);
  for (int k : keep) {
    require(k >= 0 && k < profile.count(), "partial_trace: invalid subsystem index");
    require(!kept[static_cast<std::size_t>(k)], "partial_trace: duplicate subsystem index");
    kept[static_cast<std::size_t>(k)] = true;
  }

  std::vector<int> keep_sorted;
  for (int k = 0; k < profile.count(); ++k)
    if (kept[static_cast<std::size_t>(k)]) keep_sorted.push_back(k);

  std::vector<int> out_dims;
  for (int k : keep_sorted) out_dims.push_back(profile.dim(k));
  DimProfile out_profile(out_dims);

  const int d = profile.total();
  Matrix out = Matrix::Zero(out_profile.total(), out_profile.total());
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      bool diagonal_on_traced = true;
      for (int k = 0; k < profile.count() && diagonal_on_traced; ++k)
        if (!kept[static_cast<std::size_t>(k)] && profile.digit(r, k) != profile.digit(c, k))
          diagonal_on_traced = false;
      if (!diagonal_on_traced) continue;
      int ro = 0, co = 0;
      for (std::size_t i = 0; i < keep_sorted.size(); ++i) {
        const int s = out_profile.stride(static_cast<int>(i));
        ro += profile.digit(r, keep_sorted[i]) * s;
        co += profile.digit(c, keep_sorted[i]) * s;
      }
      out(ro, co) += m(r, c);
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  Matrix out = partial_trace(rho.matrix(), rho.profile(), keep);
  std::vector<bool> kept(static_cast<std::size_t>(rho.profile().count()), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;
  std::vector<int> out_dims;
  for (int k = 0; k < rho.profile().count(); ++k)
    if (kept[static_cast<std::size_t>(k)]) out_dims.push_back(rho.profile().dim(k));
  // Tracing keeps all three invariants; reuse the input tolerance.
  return DensityOperator(std::move(out), DimProfile(out_dims), rho.tolerance());
}

Matrix partial_transpose(const Matrix& m, const DimProfile& profile, int subsystem) {
  require(m.rows() == m.cols(), "partial_transpose: matrix must be square");
  require(m.rows() == profile.total(), "partial_transpose: profile does not match matrix");
  require(subsystem >= 0 && subsystem < profile.count(),
          "partial_transpose: invalid subsystem index");

  const int d = profile.total();
  const int stride = profile.stride(subsystem);
  const int dim = profile.dim(subsystem);
  Matrix out(d, d);
  for (int r = 0; r < d; ++r) {
    const int rd = (r / stride) % dim;
    for (int c = 0; c < d; ++c) {
      const int cd = (c / stride) % dim;
      const int r2 = r + (cd - rd) * stride;
      const int c2 = c + (rd - cd) * stride;
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityOperator& rho, int subsystem) {
  return partial_transpose(rho.matrix(), rho.profile(), subsystem);
}

Matrix partial_transpose(const Matrix& m, const DimProfile& profile,
                         const std::vector<int>& subsystems) {
  Matrix out = m;
  for (int s : subsystems) out = partial_transpose(out, profile, s);
  return out;
}

// ---------------------------------------------------------------------------
// Spectra and metrics
// ---------------------------------------------------------------------------

EigResult eig_hermitian(const Matrix& a, double tol) {
  require(a.rows() == a.cols(), "eig_hermitian: matrix must be square");
  require(a.allFinite(), "eig_hermitian: entries must be finite");
  const double herm_err = max_abs_diff(a, a.adjoint());
  require(herm_err <= tol, "eig_hermitian: input not Hermitian (max deviation " +
                               std::to_string(herm_err) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  require(solver.info() == Eigen::Success, "eig_hermitian: eigensolver failed");
  return EigResult{solver.eigenvalues(), solver.eigenvectors()};
}

double trace_distance(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          "trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a - b),
                                               Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  return trace_distance(rho.matrix(), sigma.matrix());
}

DensityDiagnostics is_density(const Matrix& m, const DimProfile& profile, double tol) {
  require(m.rows() == m.cols(), "is_density: matrix must be square");
  require(m.rows() == profile.total(), "is_density: profile does not match matrix");

  DensityDiagnostics diag;
  if (!m.allFinite()) {
    diag.hermitian_error = diag.trace_error = std::numeric_limits<double>::infinity();
    diag.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return diag;
  }
  diag.hermitian_error = max_abs_diff(m, m.adjoint());
  diag.hermitian = diag.hermitian_error <= tol;
  diag.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  diag.unit_trace = diag.trace_error <= tol;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  diag.min_eigenvalue = solver.eigenvalues().minCoeff();
  diag.positive = diag.min_eigenvalue >= -tol;
  return diag;
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

double GaussianStream::uniform_closed() {
  // (x >> 11) is uniform on {0, ..., 2^53 - 1}; +1 shifts into (0, 2^53].
  return static_cast<double>((engine_() >> 11) + 1) * 0x1p-53;
}

double GaussianStream::uniform_open() {
  return static_cast<double>(engine_() >> 11) * 0x1p-53;
}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_closed();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Complex GaussianStream::next_complex() {
  const double u1 = uniform_closed();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  return Complex(radius * std::cos(angle) * inv_sqrt2,
                 radius * std::sin(angle) * inv_sqrt2);
}

Matrix ginibre(int rows, int cols, std::uint64_t seed) {
  require(rows >= 1 && cols >= 1, "ginibre: dimensions must be positive");
  GaussianStream stream(seed);
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = stream.next_complex();
  return g;
}

DensityOperator random_density(int dim, std::uint64_t seed) {
  require(dim >= 1, "random_density: dim must be positive");
  const Matrix g = ginibre(dim, dim, seed);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = hermitian_part(rho);
  return DensityOperator(std::move(rho), DimProfile({dim}));
}

DensityOperator random_pure(int dim, std::uint64_t seed) {
  require(dim >= 1, "random_pure: dim must be positive");
  GaussianStream stream(seed);
  Vector psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = stream.next_complex();
  psi.normalize();
  Matrix rho = psi * psi.adjoint();
  return DensityOperator(hermitian_part(rho), DimProfile({dim}));
}

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, int rows, int cols) {
  require(static_cast<Eigen::Index>(rows) * cols == v.size(), "unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Complex trace_inner(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "trace_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

Matrix hermitian_part(const Matrix& m) {
  return 0.5 * (m + m.adjoint());
}

}  // namespace censorlab

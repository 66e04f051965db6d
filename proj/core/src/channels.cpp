#include "censorlab/channels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace censorlab {

namespace {

constexpr double kTpTol = 1e-9;
constexpr double kFixedPointWindow = 1e-8;

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

void check_shapes(const std::vector<Matrix>& ops, const DimProfile& in, const DimProfile& out) {
  require(!ops.empty(), "KrausChannel: Kraus list must be nonempty");
  for (const Matrix& k : ops) {
    require(k.rows() == out.total() && k.cols() == in.total(),
            "KrausChannel: every Kraus operator must be out_dim x in_dim");
    require(k.allFinite(), "KrausChannel: Kraus entries must be finite");
  }
}

Matrix kraus_completeness(const std::vector<Matrix>& ops, int in_dim) {
  Matrix sum = Matrix::Zero(in_dim, in_dim);
  for (const Matrix& k : ops) sum += k.adjoint() * k;
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------
// KrausChannel
// ---------------------------------------------------------------------------

KrausChannel::KrausChannel(std::vector<Matrix> kraus_ops, DimProfile in_profile,
                           DimProfile out_profile)
    : kraus_(std::move(kraus_ops)), in_(std::move(in_profile)), out_(std::move(out_profile)) {
  check_shapes(kraus_, in_, out_);
  const double err = max_abs_diff(kraus_completeness(kraus_, in_.total()), identity(in_.total()));
  require(err <= kTpTol,
          "KrausChannel: not trace-preserving (max |sum K^dag K - I| = " + std::to_string(err) +
              ")");
}

KrausChannel::KrausChannel(unchecked_t, std::vector<Matrix> kraus_ops, DimProfile in_profile,
                           DimProfile out_profile)
    : kraus_(std::move(kraus_ops)), in_(std::move(in_profile)), out_(std::move(out_profile)) {
  check_shapes(kraus_, in_, out_);
}

KrausChannel KrausChannel::unchecked(std::vector<Matrix> kraus_ops, DimProfile in_profile,
                                     DimProfile out_profile) {
  return KrausChannel(unchecked_t{}, std::move(kraus_ops), std::move(in_profile),
                      std::move(out_profile));
}

// ---------------------------------------------------------------------------
// Channel algebra
// ---------------------------------------------------------------------------

KrausChannel identity_channel(const DimProfile& profile) {
  return KrausChannel({identity(profile.total())}, profile, profile);
}

Matrix apply_matrix(const KrausChannel& ch, const Matrix& m) {
  require(m.rows() == ch.in_dim() && m.cols() == ch.in_dim(),
          "apply: operator dimension does not match channel input");
  Matrix out = Matrix::Zero(ch.out_dim(), ch.out_dim());
  for (const Matrix& k : ch.kraus()) out += k * m * k.adjoint();
  return out;
}

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho) {
  require(rho.profile().total() == ch.in_dim(),
          "apply: state dimension does not match channel input");
  Matrix out = hermitian_part(apply_matrix(ch, rho.matrix()));
  // CPTP output can drift slightly past the input tolerance; validate at 1e-8.
  return DensityOperator(std::move(out), ch.out_profile(), std::max(rho.tolerance(), 1e-8));
}

KrausChannel compose(const KrausChannel& after, const KrausChannel& before) {
  require(before.out_profile().total() == after.in_profile().total(),
          "compose: inner dimensions do not match");
  std::vector<Matrix> ops;
  ops.reserve(after.kraus().size() * before.kraus().size());
  for (const Matrix& a : after.kraus())
    for (const Matrix& b : before.kraus()) ops.push_back(a * b);
  return KrausChannel::unchecked(std::move(ops), before.in_profile(), after.out_profile());
}

KrausChannel tensor_channels(const std::vector<KrausChannel>& chs) {
  require(!chs.empty(), "tensor_channels: channel list must be nonempty");
  std::vector<Matrix> ops = chs.front().kraus();
  DimProfile in = chs.front().in_profile();
  DimProfile out = chs.front().out_profile();
  for (std::size_t i = 1; i < chs.size(); ++i) {
    std::vector<Matrix> next;
    next.reserve(ops.size() * chs[i].kraus().size());
    for (const Matrix& a : ops)
      for (const Matrix& b : chs[i].kraus()) next.push_back(kron(a, b));
    ops = std::move(next);
    in = DimProfile::concat(in, chs[i].in_profile());
    out = DimProfile::concat(out, chs[i].out_profile());
  }
  return KrausChannel::unchecked(std::move(ops), std::move(in), std::move(out));
}

// ---------------------------------------------------------------------------
// Representations and classification
// ---------------------------------------------------------------------------

Superoperator superoperator_of(const KrausChannel& ch) {
  // Column-stacking identity: vec(K rho K^dag) = (conj(K) (x) K) vec(rho).
  const int din = ch.in_dim();
  const int dout = ch.out_dim();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dout) * dout,
                          static_cast<Eigen::Index>(din) * din);
  for (const Matrix& k : ch.kraus()) m += kron(k.conjugate(), k);
  return Superoperator{std::move(m), din, dout};
}

ChoiMatrix choi_of(const KrausChannel& ch) {
  const int din = ch.in_dim();
  const int dout = ch.out_dim();
  Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(din) * dout,
                             static_cast<Eigen::Index>(din) * dout);
  for (int i = 0; i < din; ++i) {
    for (int j = 0; j < din; ++j) {
      // block = ch(|i><j|) = sum_k K|i><j|K^dag = sum_k K.col(i) K.col(j)^dag
      Matrix block = Matrix::Zero(dout, dout);
      for (const Matrix& k : ch.kraus()) block += k.col(i) * k.col(j).adjoint();
      choi.block(static_cast<Eigen::Index>(i) * dout, static_cast<Eigen::Index>(j) * dout,
                 dout, dout) = block / static_cast<double>(din);
    }
  }
  return ChoiMatrix{hermitian_part(choi), din, dout};
}

std::string CptpDiagnostics::describe() const {
  if (ok()) return "completely positive and trace-preserving";
  std::ostringstream out;
  out << "not CPTP:";
  if (!trace_preserving) out << " max |sum K^dag K - I| = " << tp_error;
  if (!completely_positive) out << " Choi minimum eigenvalue = " << choi_min_eigenvalue;
  return out.str();
}

CptpDiagnostics is_cptp(const KrausChannel& ch, double tol) {
  CptpDiagnostics diag;
  diag.tp_error =
      max_abs_diff(kraus_completeness(ch.kraus(), ch.in_dim()), identity(ch.in_dim()));
  diag.trace_preserving = diag.tp_error <= tol;
  const ChoiMatrix choi = choi_of(ch);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi.matrix, Eigen::EigenvaluesOnly);
  diag.choi_min_eigenvalue = solver.eigenvalues().minCoeff();
  diag.completely_positive = diag.choi_min_eigenvalue >= -tol;
  return diag;
}

std::string to_string(EbVerdict v) {
  switch (v) {
    case EbVerdict::Yes: return "Yes";
    case EbVerdict::No: return "No";
    case EbVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

EbVerdict is_entanglement_breaking(const KrausChannel& ch) {
  const ChoiMatrix choi = choi_of(ch);
  const Matrix pt = partial_transpose(choi.matrix, choi.profile(), 1);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(pt), Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kDefaultTol) return EbVerdict::No;
  if (choi.in_dim * choi.out_dim <= 6) return EbVerdict::Yes;
  return EbVerdict::Inconclusive;
}

Matrix FixedPointSubspace::project(const Matrix& m) const {
  require(!basis.empty(), "FixedPointSubspace: empty basis");
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const Matrix& b : basis) out += trace_inner(b, m) * b;
  return out;
}

FixedPointSubspace fixed_point_subspace(const KrausChannel& ch) {
  require(ch.in_profile() == ch.out_profile(),
          "fixed_point_subspace: channel must have equal input and output profiles");
  const int d = ch.in_dim();
  const Superoperator sup = superoperator_of(ch);

  Eigen::ComplexEigenSolver<Matrix> solver(sup.matrix);
  require(solver.info() == Eigen::Success, "fixed_point_subspace: eigensolver failed");

  // Collect eigenvectors in the |lambda - 1| window, then close the span
  // under Hermitian symmetrization: an idempotent CPTP map fixes X iff it
  // fixes X^dag, so the Hermitian and anti-Hermitian parts are candidates.
  std::vector<Matrix> candidates;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    if (std::abs(solver.eigenvalues()(k) - Complex(1.0, 0.0)) > kFixedPointWindow) continue;
    const Matrix b = unvec(solver.eigenvectors().col(k), d, d);
    candidates.push_back(hermitian_part(b));
    candidates.push_back(hermitian_part(Complex(0.0, -1.0) * b));
  }

  // Modified Gram-Schmidt over the real span with the trace inner product.
  FixedPointSubspace fix;
  for (Matrix& c : candidates) {
    for (const Matrix& b : fix.basis) c -= std::real(trace_inner(b, c)) * b;
    const double norm = std::sqrt(std::real(trace_inner(c, c)));
    if (norm < 1e-6) continue;
    c /= norm;
    // Keep only directions the channel genuinely fixes; symmetrization of a
    // degenerate pair can mix in decaying directions.
    if (max_abs_diff(apply_matrix(ch, c), c) > kFixedPointWindow) continue;
    fix.basis.push_back(std::move(c));
  }
  fix.dimension = static_cast<int>(fix.basis.size());
  return fix;
}

bool is_fixed_point(const KrausChannel& ch, const DensityOperator& rho, double tol) {
  require(rho.profile().total() == ch.in_dim() && ch.in_dim() == ch.out_dim(),
          "is_fixed_point: dimension mismatch");
  return trace_distance(apply_matrix(ch, rho.matrix()), rho.matrix()) <= tol;
}

bool is_idempotent(const KrausChannel& ch, double tol) {
  if (!(ch.in_profile() == ch.out_profile())) return false;
  const Matrix m = superoperator_of(ch).matrix;
  return max_abs_diff(m * m, m) <= tol;
}

double superoperator_distance(const KrausChannel& a, const KrausChannel& b) {
  require(a.in_dim() == b.in_dim() && a.out_dim() == b.out_dim(),
          "superoperator_distance: dimension mismatch");
  return max_abs_diff(superoperator_of(a).matrix, superoperator_of(b).matrix);
}

}  // namespace censorlab

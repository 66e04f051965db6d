#pragma once

#include "censorlab/qmath.hpp"

#include <optional>
#include <string>
#include <vector>

namespace censorlab {

/// Completely positive trace-preserving map as a finite Kraus list. Every
/// operator is out_dim x in_dim; trace preservation sum_k K_k^dag K_k = I is
/// checked on construction within 1e-9 max-entry error.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> kraus_ops, DimProfile in_profile, DimProfile out_profile);

  /// Shape-checked construction that skips the trace-preservation check.
  /// Exists so verdict-style diagnostics (is_cptp) can examine broken maps.
  static KrausChannel unchecked(std::vector<Matrix> kraus_ops, DimProfile in_profile,
                                DimProfile out_profile);

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const DimProfile& in_profile() const { return in_; }
  const DimProfile& out_profile() const { return out_; }
  int in_dim() const { return in_.total(); }
  int out_dim() const { return out_.total(); }

 private:
  struct unchecked_t {};
  KrausChannel(unchecked_t, std::vector<Matrix> kraus_ops, DimProfile in_profile,
               DimProfile out_profile);

  std::vector<Matrix> kraus_;
  DimProfile in_;
  DimProfile out_;
};

/// Matrix acting on column-stacked operators: matrix * vec(rho) = vec(ch(rho)).
struct Superoperator {
  Matrix matrix;  // (out_dim^2) x (in_dim^2)
  int in_dim = 0;
  int out_dim = 0;
};

/// (id (x) ch) applied to |Omega><Omega| with |Omega> = sum_i |ii>/sqrt(d).
/// A density operator with profile (in_dim, out_dim); the partial trace over
/// the output factor is I/in_dim.
struct ChoiMatrix {
  Matrix matrix;
  int in_dim = 0;
  int out_dim = 0;

  DimProfile profile() const { return DimProfile({in_dim, out_dim}); }
};

struct CptpDiagnostics {
  bool trace_preserving = false;
  bool completely_positive = false;
  double tp_error = 0.0;           // max-entry |sum K^dag K - I|
  double choi_min_eigenvalue = 0.0;

  bool ok() const { return trace_preserving && completely_positive; }
  std::string describe() const;
};

enum class EbVerdict { Yes, No, Inconclusive };

std::string to_string(EbVerdict v);

/// Orthonormal (trace inner product) Hermitian basis of the eigenvalue-1
/// eigenspace of a channel's superoperator.
struct FixedPointSubspace {
  std::vector<Matrix> basis;
  int dimension = 0;

  /// Trace-inner-product projection of an operator onto the subspace span.
  Matrix project(const Matrix& m) const;
};

// ---------------------------------------------------------------------------
// Channel algebra
// ---------------------------------------------------------------------------

KrausChannel identity_channel(const DimProfile& profile);

DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho);

/// Linear action sum_k K m K^dag on an arbitrary operator (no state checks).
Matrix apply_matrix(const KrausChannel& ch, const Matrix& m);

/// after o before; Kraus list is all products.
KrausChannel compose(const KrausChannel& after, const KrausChannel& before);

/// Tensor product channel; Kraus list is all Kronecker products of one
/// operator per factor, profiles concatenate left to right.
KrausChannel tensor_channels(const std::vector<KrausChannel>& chs);

// ---------------------------------------------------------------------------
// Representations and classification
// ---------------------------------------------------------------------------

Superoperator superoperator_of(const KrausChannel& ch);

ChoiMatrix choi_of(const KrausChannel& ch);

CptpDiagnostics is_cptp(const KrausChannel& ch, double tol = kDefaultTol);

/// Separability of the Choi matrix across (input, output), decided by PPT.
/// PPT violation is conclusive No in any dimension; a PPT pass is conclusive
/// Yes only when in_dim * out_dim <= 6, otherwise Inconclusive.
EbVerdict is_entanglement_breaking(const KrausChannel& ch);

/// Eigenvalue-1 eigenspace of the superoperator (window |lambda - 1| <= 1e-8),
/// closed under Hermitian symmetrization and trace-orthonormalized.
/// Requires in_profile == out_profile.
FixedPointSubspace fixed_point_subspace(const KrausChannel& ch);

bool is_fixed_point(const KrausChannel& ch, const DensityOperator& rho, double tol);

/// superoperator(ch o ch) == superoperator(ch) within tol.
bool is_idempotent(const KrausChannel& ch, double tol = 1e-9);

/// Max-entry distance between two channels' superoperators (the canonical
/// equality test; Kraus representations are non-unique).
double superoperator_distance(const KrausChannel& a, const KrausChannel& b);

}  // namespace censorlab

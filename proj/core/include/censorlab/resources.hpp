#pragma once

#include "censorlab/channels.hpp"
#include "censorlab/qmath.hpp"
#include "censorlab/twirl_group.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace censorlab {

enum class Verdict { Member, NonMember, Inconclusive };

std::string to_string(Verdict v);

/// Verdict plus a checkable certificate: hull coefficients for hull queries,
/// the offending partial-transpose eigenvalue (and cut) for PPT queries, or
/// the violated structural constraint in `reason`. Inconclusive verdicts
/// carry the reason they could not be decided.
struct MembershipVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::optional<Eigen::VectorXd> hull_coefficients;
  std::optional<double> pt_min_eigenvalue;
  std::optional<std::vector<int>> pt_cut;  // transposed subsystems
  std::optional<double> residual;          // reconstruction / violation magnitude
};

/// Nonempty list of density operators sharing one profile; the generators
/// sigma_a of an affine or convex hull.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<DensityOperator> states);

  const std::vector<DensityOperator>& states() const { return states_; }
  const DimProfile& profile() const { return states_.front().profile(); }
  int size() const { return static_cast<int>(states_.size()); }

 private:
  std::vector<DensityOperator> states_;
};

/// Membership decider for a free-state family F or an authorized subspace F'.
/// Structural kinds (incoherent, twirl-invariant, classical-quantum, PPT) and
/// composite hulls over per-party factors.
class FreeSetOracle {
 public:
  enum class Kind {
    Incoherent,
    TwirlInvariant,
    ClassicalQuantum,
    SeparablePPT,
    AffineComposite,
    ConvexComposite,
  };

  static FreeSetOracle incoherent(int dim, double tol = kDefaultTol);
  static FreeSetOracle twirl_invariant(TwirlGroup group, double tol = kDefaultTol);
  static FreeSetOracle classical_quantum(int x_dim, int y_dim, double tol = kDefaultTol);
  /// profile must have at least two factors (the cuts PPT is tested across).
  static FreeSetOracle separable_ppt(DimProfile profile, double tol = kDefaultTol);
  static FreeSetOracle affine_composite(std::vector<FreeSetOracle> factors,
                                        double tol = kDefaultTol);
  static FreeSetOracle convex_composite(std::vector<FreeSetOracle> factors,
                                        double tol = kDefaultTol);

  Kind kind() const { return kind_; }
  double tolerance() const { return tol_; }
  /// Joint profile of states this oracle accepts.
  const DimProfile& profile() const { return profile_; }
  bool is_composite() const {
    return kind_ == Kind::AffineComposite || kind_ == Kind::ConvexComposite;
  }
  const std::vector<FreeSetOracle>& factors() const;
  const TwirlGroup& group() const;
  int x_dim() const { return x_dim_; }
  int y_dim() const { return y_dim_; }

  std::string describe() const;

 private:
  FreeSetOracle(Kind kind, DimProfile profile, double tol);

  Kind kind_;
  DimProfile profile_;
  double tol_;
  int x_dim_ = 0;
  int y_dim_ = 0;
  std::shared_ptr<const TwirlGroup> group_;
  std::shared_ptr<const std::vector<FreeSetOracle>> factors_;
};

/// Result of comparing a censor's fixed operator subspace against the span of
/// an authorized generator set.
struct SubspaceComparison {
  bool supported = false;  // false when the censor is not idempotent
  bool equal = false;
  int fixed_dimension = 0;
  int generator_span_dimension = 0;
  double generators_to_fixed_residual = 0.0;
  double fixed_to_generators_residual = 0.0;
};

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

/// Structural membership test. Composite kinds delegate to
/// composite_membership with the given sampling budget.
MembershipVerdict membership(const FreeSetOracle& oracle, const DensityOperator& rho,
                             int sample_budget = 256);

/// Member iff real t with sum t = 1 and sum t_a sigma_a = rho exists, decided
/// by least squares with the unit-sum constraint appended as a row; the
/// certificate carries the coefficients.
MembershipVerdict affine_hull_membership(const DensityOperator& rho, const GeneratorSet& gens,
                                         double tol);

/// Affine feasibility with additionally t >= 0 (non-negative least squares).
MembershipVerdict convex_hull_membership(const DensityOperator& rho, const GeneratorSet& gens,
                                         double tol);

/// Joint membership for composite oracles, decided structurally (marginal
/// checks, joint block patterns, PPT across every bipartition) wherever the
/// factor kinds admit it; honestly Inconclusive otherwise.
MembershipVerdict composite_membership(const FreeSetOracle& oracle, const DensityOperator& rho,
                                       int sample_budget);

/// True iff the censor's fixed operator subspace equals the span of the
/// generators, by mutual containment within 1e-8.
SubspaceComparison fixed_set_equals_affine_hull_check(const KrausChannel& censor,
                                                      const GeneratorSet& subspace_gens);

// ---------------------------------------------------------------------------
// Shared structural predicates (used by protocol for containment arguments)
// ---------------------------------------------------------------------------

/// Largest off-diagonal magnitude.
double max_offdiagonal(const Matrix& m);

/// Largest magnitude among entries whose row and column differ in any of the
/// listed subsystems ("X-coherences" across those factors).
double max_block_offdiagonal(const Matrix& m, const DimProfile& profile,
                             const std::vector<int>& block_subsystems);

/// Minimum partial-transpose eigenvalue over every bipartition of the
/// profile's factors; also reports the worst cut.
std::pair<double, std::vector<int>> min_ppt_eigenvalue(const Matrix& m,
                                                       const DimProfile& profile);

/// Projection onto the oracle's free set, available when the kind (or every
/// composite factor kind) has a canonical projection: incoherent,
/// twirl-invariant, classical-quantum. For those affine families a state is
/// free iff the projection fixes it. Returns nullopt when some factor has no
/// projection (PPT kinds).
std::optional<Matrix> free_set_projection(const FreeSetOracle& oracle, const Matrix& m);

}  // namespace censorlab

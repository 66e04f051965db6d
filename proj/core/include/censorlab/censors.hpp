#pragma once

#include "censorlab/channels.hpp"
#include "censorlab/qmath.hpp"
#include "censorlab/resources.hpp"
#include "censorlab/twirl_group.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace censorlab {

/// Tagged description of one of the four censor constructions. The incoherent
/// and classical bases are always the computational basis; the optical |H>,
/// |V> labels map to indices 0, 1.
struct CensorSpec {
  struct Dephasing {
    int dim;
  };
  struct Twirl {
    TwirlGroup group;
  };
  struct CqCensor {
    int x_dim;
    int y_dim;
  };
  struct Replacement {
    DensityOperator target;
  };

  std::variant<Dephasing, Twirl, CqCensor, Replacement> kind;

  std::string describe() const;
  /// Input/output profile of the censor this spec constructs.
  DimProfile profile() const;
};

// ---------------------------------------------------------------------------
// Censor constructors
// ---------------------------------------------------------------------------

/// Completely dephasing channel, Kraus set {|x><x|}. Destroys coherence and
/// fixes exactly the diagonal states.
KrausChannel dephasing_channel(int dim);

/// Group averaging rho -> (1/|G|) sum_a U_a rho U_a^dag, Kraus set
/// {U_a / sqrt(|G|)}. A projection onto the twirl-invariant states.
KrausChannel twirl_channel(const TwirlGroup& group);

/// Kraus set {|x><x| (x) I_y}: dephasing on the classical register, identity
/// on the quantum one. Equals dephasing(x) (x) id(y) at superoperator level.
KrausChannel cq_censor_channel(int x_dim, int y_dim);

/// Every input maps to the target: rho -> Tr(rho) sigma.
KrausChannel replacement_channel(const DensityOperator& target);

/// Builds the channel a spec describes.
KrausChannel censor_channel(const CensorSpec& spec);

/// Canonical generators of the authorized subspace F' a censor stabilizes:
/// basis projectors for dephasing, twirled density-basis states for twirl,
/// |x><x| (x) (Y density basis) for the classical-quantum censor, and the
/// target alone for replacement.
GeneratorSet authorized_generators(const CensorSpec& spec);

/// The free-set oracle of the QRT each censor construction belongs to
/// (dephasing: incoherent; twirl: twirl-invariant; cq: PPT-separable across
/// the classical/quantum split). Replacement has no canonical QRT and
/// returns nullopt.
std::optional<FreeSetOracle> natural_free_oracle(const CensorSpec& spec);

/// Real-spanning set of density operators on dimension d (d^2 states:
/// basis projectors plus two pure states per off-diagonal pair).
std::vector<DensityOperator> density_basis(int dim);

// ---------------------------------------------------------------------------
// Named groups
// ---------------------------------------------------------------------------

/// {I, Z} in dimension 2; twirling over it equals the qubit dephasing map.
TwirlGroup iz_group();

/// Single-qubit Pauli group {I, X, Y, Z} (projective closure); twirling over
/// it replaces every state with I/2.
TwirlGroup pauli_group_1q();

/// Cyclic shift group {X^k} on dimension d.
TwirlGroup cyclic_shift_group(int dim);

TwirlGroup named_group(const std::string& name);

// ---------------------------------------------------------------------------
// RD / RC condition verifiers
// ---------------------------------------------------------------------------

/// Version of the fixed adversarial input list used by
/// verify_resource_destroying; bump when the list changes.
inline constexpr int kAdversarialListVersion = 1;

struct DestroyReport {
  bool pass = false;
  int checked = 0;
  int member = 0;
  int nonmember = 0;
  int inconclusive = 0;
  int adversarial_version = kAdversarialListVersion;
  std::optional<Matrix> witness;        // first input whose output left F
  std::string witness_reason;
};

struct PreserveReport {
  bool pass = false;
  int checked = 0;
  int skipped = 0;  // affine combinations that were not valid densities
  double max_distance = 0.0;
  std::optional<Matrix> witness;  // first input moved farther than tol
};

/// Condition (i): channel output lands in the free set for `samples` Ginibre
/// states plus a fixed adversarial list (maximally coherent state, Bell
/// states where dimensions allow, deterministic random pure states).
/// Inconclusive outputs never count toward a pass.
DestroyReport verify_resource_destroying(const KrausChannel& ch, const FreeSetOracle& free,
                                         int samples, std::uint64_t seed);

/// Condition (ii) on the affine span of the generators: every generator and
/// 100 random affine combinations (skipping those that fail to be densities)
/// must be fixed points within tol.
PreserveReport verify_freeness_preserving(const KrausChannel& ch,
                                          const GeneratorSet& subspace_gens, double tol);

}  // namespace censorlab

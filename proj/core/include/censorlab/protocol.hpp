#pragma once

#include "censorlab/censors.hpp"
#include "censorlab/channels.hpp"
#include "censorlab/qmath.hpp"
#include "censorlab/resources.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace censorlab {

/// One sender-receiver pair: an optional noise channel ahead of the censor,
/// the authorized subspace F' the users agreed to, and the local free set F.
/// Construction checks that every authorized generator is a fixed point of
/// the censor within 1e-8 (the user agreement is self-consistent).
class Party {
 public:
  Party(std::string label, CensorSpec censor_spec, std::optional<KrausChannel> noise,
        GeneratorSet authorized_subspace, FreeSetOracle free_oracle);

  /// Party with the censor's canonical authorized subspace and free set.
  static Party standard(std::string label, CensorSpec censor_spec,
                        std::optional<KrausChannel> noise = std::nullopt);

  const std::string& label() const { return label_; }
  const DimProfile& local_profile() const { return censor_.in_profile(); }
  const std::optional<KrausChannel>& noise() const { return noise_; }
  const CensorSpec& censor_spec() const { return censor_spec_; }
  const KrausChannel& censor() const { return censor_; }
  const GeneratorSet& authorized_subspace() const { return authorized_; }
  const FreeSetOracle& free_oracle() const { return free_oracle_; }

 private:
  std::string label_;
  CensorSpec censor_spec_;
  KrausChannel censor_;
  std::optional<KrausChannel> noise_;
  GeneratorSet authorized_;
  FreeSetOracle free_oracle_;
};

/// N parties, a joint input state, and the composite free set the verdicts
/// are issued against. seed and budget drive the fixed-subspace sampling in
/// breakability_analysis.
struct Scenario {
  std::vector<Party> parties;
  DensityOperator input_state;
  FreeSetOracle composite_free_oracle;
  bool noisy = false;
  std::uint64_t seed = 0;
  int budget = 256;

  Scenario(std::vector<Party> parties, DensityOperator input_state,
           FreeSetOracle composite_free_oracle, std::uint64_t seed = 0, int budget = 256);

  DimProfile joint_profile() const;
};

/// Stage-by-stage record of one protocol run.
struct Transcript {
  std::vector<std::pair<std::string, DensityOperator>> stages;  // input, post-noise, post-censor
  bool transmitted_unaltered = false;
  MembershipVerdict output_membership;

  const DensityOperator& final_state() const { return stages.back().second; }
};

enum class Breakability { UnbreakableProved, BrokenWitness, NoWitnessFound };

std::string to_string(Breakability b);

/// Outcome of the breakability analysis. BrokenWitness carries a state that
/// is provably fixed by the product censor and NonMember of the composite
/// free set; UnbreakableProved records the structural containment argument;
/// NoWitnessFound summarizes the sampling that came up empty.
struct BreakabilityVerdict {
  Breakability status = Breakability::NoWitnessFound;
  FixedPointSubspace fixed_subspace;
  std::string argument;
  std::optional<DensityOperator> witness;
  std::optional<MembershipVerdict> witness_membership;
  double witness_fixed_distance = 0.0;
  int samples_tried = 0;
  int samples_valid = 0;  // projections that were valid densities
};

struct EbReport {
  bool applicable = false;  // composite oracle describes a convex QRT
  std::vector<EbVerdict> party_verdicts;
  bool all_entanglement_breaking = false;
  bool any_inconclusive = false;
  std::optional<Breakability> asserted;  // set when every censor is EB
  Breakability analysis_status = Breakability::NoWitnessFound;
  bool consistent = true;  // hard failure when false
  std::string note;
};

struct CommutationReport {
  bool pass = false;
  int checked = 0;
  double max_distance = 0.0;
  std::optional<Matrix> witness;           // state with the largest violation
  std::optional<Matrix> censor_after_noise;  // (censor o noise)(witness)
  std::optional<Matrix> noise_after_censor;  // (noise o censor)(witness)
};

struct NonGeneratingReport {
  bool pass = false;
  int checked = 0;
  int member = 0;
  int nonmember = 0;
  int inconclusive = 0;
  std::optional<Matrix> witness;  // free input mapped outside the free set
  std::string witness_reason;
};

struct CorrectionReport {
  double noisy_distance = 0.0;     // || Phi(sigma) - sigma ||
  double censored_distance = 0.0;  // || censor(Phi(sigma)) - sigma ||
  bool censor_corrects = false;    // censored strictly closer
};

// ---------------------------------------------------------------------------
// Protocol operations
// ---------------------------------------------------------------------------

/// Applies per-party noise (identity where absent), then the product censor,
/// recording input / post-noise / post-censor stages.
Transcript run_scenario(const Scenario& s);

/// Decides breakability per the fixed-subspace characterization: structural
/// containment proofs where the composite oracle admits them, the known
/// classical-quantum breaking construction, then seeded sampling of the
/// fixed subspace. Requires every party censor to be idempotent.
BreakabilityVerdict breakability_analysis(const Scenario& s);

/// Entanglement-breaking shortcut for convex composite oracles: when every
/// party censor is entanglement breaking, censorship is unbreakable;
/// cross-checked against breakability_analysis, disagreement is reported as
/// a hard failure (consistent == false).
EbReport eb_unbreakability_check(const Scenario& s);

/// Does (censor o noise) equal (noise o censor) on the span of the free
/// generators? Checks every generator plus sampled convex mixtures.
CommutationReport commutation_check(const KrausChannel& noise, const KrausChannel& censor,
                                    const GeneratorSet& free_gens, int samples);

/// Is the noise resource non-generating: does it keep every generator and
/// sampled mixture inside the free set?
NonGeneratingReport nongenerating_check(const KrausChannel& noise, const FreeSetOracle& free,
                                        const GeneratorSet& free_gens, int samples);

/// Unitary channel exchanging the two tensor factors; requires equal factor
/// dimensions.
KrausChannel swap_channel(int x_dim, int y_dim);

/// For an authorized sigma: how far the noisy message strays and whether the
/// censor pulls it back closer. Requires sigma to be fixed by the censor.
CorrectionReport correction_effect_probe(const KrausChannel& noise, const KrausChannel& censor,
                                         const DensityOperator& sigma);

}  // namespace censorlab

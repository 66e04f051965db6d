#include "censorlab/protocol.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace censorlab {

namespace {

constexpr double kFixTol = 1e-8;

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

KrausChannel product_censor(const Scenario& s) {
  std::vector<KrausChannel> censors;
  censors.reserve(s.parties.size());
  for (const Party& p : s.parties) censors.push_back(p.censor());
  return tensor_channels(censors);
}

KrausChannel product_noise(const Scenario& s) {
  std::vector<KrausChannel> noises;
  noises.reserve(s.parties.size());
  for (const Party& p : s.parties)
    noises.push_back(p.noise().has_value() ? *p.noise() : identity_channel(p.local_profile()));
  return tensor_channels(noises);
}

bool composite_is_convex(const FreeSetOracle& oracle) {
  return oracle.kind() == FreeSetOracle::Kind::ConvexComposite ||
         oracle.kind() == FreeSetOracle::Kind::SeparablePPT;
}

/// True when the composite free set contains every mixture of computational
/// product-basis projectors, so an all-diagonal fixed basis certifies
/// containment.
bool free_set_contains_all_diagonals(const FreeSetOracle& oracle) {
  switch (oracle.kind()) {
    case FreeSetOracle::Kind::Incoherent:
    case FreeSetOracle::Kind::ClassicalQuantum:
    case FreeSetOracle::Kind::SeparablePPT:
      return true;
    case FreeSetOracle::Kind::TwirlInvariant:
      return false;  // basis projectors need not be twirl invariant
    case FreeSetOracle::Kind::AffineComposite:
    case FreeSetOracle::Kind::ConvexComposite:
      return std::all_of(oracle.factors().begin(), oracle.factors().end(),
                         free_set_contains_all_diagonals);
  }
  return false;
}

bool all_diagonal(const std::vector<Matrix>& basis, double tol) {
  for (const Matrix& b : basis)
    if (max_offdiagonal(b) > tol) return false;
  return true;
}

/// Known breaking construction for classical-quantum censors: basis
/// states on the classical registers, a Bell pair across the first two
/// parties' quantum registers, ground states elsewhere.
std::optional<DensityOperator> cq_breaking_state(const Scenario& s) {
  if (s.parties.size() < 2) return std::nullopt;
  std::vector<CensorSpec::CqCensor> cqs;
  for (const Party& p : s.parties) {
    const auto* cq = std::get_if<CensorSpec::CqCensor>(&p.censor_spec().kind);
    if (cq == nullptr) return std::nullopt;
    cqs.push_back(*cq);
  }
  if (cqs[0].y_dim < 2 || cqs[1].y_dim < 2) return std::nullopt;

  auto party_ket = [&](std::size_t a, int x_index, int y_index) {
    return kron(basis_ket(cqs[a].x_dim, x_index), basis_ket(cqs[a].y_dim, y_index));
  };
  // |0>_X1 |k>_Y1 (x) |1>_X2 |k>_Y2 (x) |0,0> elsewhere, summed over k = 0, 1.
  Vector psi;
  for (int k = 0; k < 2; ++k) {
    Vector branch = party_ket(0, 0, k);
    branch = kron(branch, party_ket(1, std::min(1, cqs[1].x_dim - 1), k));
    for (std::size_t a = 2; a < cqs.size(); ++a) branch = kron(branch, party_ket(a, 0, 0));
    psi = (k == 0) ? branch : Vector(psi + branch);
  }
  psi /= std::sqrt(2.0);
  return DensityOperator(hermitian_part(psi * psi.adjoint()), s.joint_profile());
}

}  // namespace

// ---------------------------------------------------------------------------
// Party / Scenario
// ---------------------------------------------------------------------------

Party::Party(std::string label, CensorSpec censor_spec, std::optional<KrausChannel> noise,
             GeneratorSet authorized_subspace, FreeSetOracle free_oracle)
    : label_(std::move(label)),
      censor_spec_(std::move(censor_spec)),
      censor_(censor_channel(censor_spec_)),
      noise_(std::move(noise)),
      authorized_(std::move(authorized_subspace)),
      free_oracle_(std::move(free_oracle)) {
  require(authorized_.profile().total() == censor_.in_dim(),
          "Party: authorized subspace dimension does not match censor");
  require(free_oracle_.profile().total() == censor_.out_dim(),
          "Party: free oracle dimension does not match censor");
  if (noise_.has_value()) {
    require(noise_->in_dim() == censor_.in_dim() && noise_->out_dim() == censor_.in_dim(),
            "Party: noise dimensions do not match the local profile");
  }
  for (const DensityOperator& g : authorized_.states())
    require(is_fixed_point(censor_, g, kFixTol),
            "Party " + label_ + ": authorized generator is not fixed by the censor");
}

Party Party::standard(std::string label, CensorSpec censor_spec,
                      std::optional<KrausChannel> noise) {
  GeneratorSet gens = authorized_generators(censor_spec);
  std::optional<FreeSetOracle> oracle = natural_free_oracle(censor_spec);
  if (!oracle.has_value()) {
    // Replacement: the minimal construction works for any QRT; default the
    // local free set to the separable one when the profile splits, else the
    // trivial twirl-invariant set of the identity group (all states).
    const DimProfile profile = censor_spec.profile();
    if (profile.count() >= 2)
      oracle = FreeSetOracle::separable_ppt(profile);
    else
      oracle = FreeSetOracle::twirl_invariant(
          TwirlGroup({identity(profile.total())}, "trivial"));
  }
  return Party(std::move(label), std::move(censor_spec), std::move(noise), std::move(gens),
               std::move(*oracle));
}

Scenario::Scenario(std::vector<Party> parties_in, DensityOperator input, FreeSetOracle composite,
                   std::uint64_t seed_in, int budget_in)
    : parties(std::move(parties_in)),
      input_state(std::move(input)),
      composite_free_oracle(std::move(composite)),
      seed(seed_in),
      budget(budget_in) {
  require(!parties.empty(), "Scenario: needs at least one party");
  require(budget >= 0, "Scenario: budget must be nonnegative");
  DimProfile joint = joint_profile();
  require(joint.total() == input_state.dim(),
          "Scenario: input state does not match the joint party profile");
  require(composite_free_oracle.profile().total() == joint.total(),
          "Scenario: composite oracle does not match the joint party profile");
  noisy = std::any_of(parties.begin(), parties.end(),
                      [](const Party& p) { return p.noise().has_value(); });
}

DimProfile Scenario::joint_profile() const {
  DimProfile joint = parties.front().local_profile();
  for (std::size_t i = 1; i < parties.size(); ++i)
    joint = DimProfile::concat(joint, parties[i].local_profile());
  return joint;
}

// ---------------------------------------------------------------------------
// Protocol run
// ---------------------------------------------------------------------------

Transcript run_scenario(const Scenario& s) {
  Transcript t;
  const DimProfile joint = s.joint_profile();
  DensityOperator input(s.input_state.matrix(), joint, std::max(s.input_state.tolerance(), 1e-8));
  t.stages.emplace_back("input", input);

  DensityOperator after_noise = apply(product_noise(s), input);
  t.stages.emplace_back("post-noise", after_noise);

  DensityOperator after_censor = apply(product_censor(s), after_noise);
  t.stages.emplace_back("post-censor", after_censor);

  t.transmitted_unaltered = trace_distance(input, after_censor) <= kFixTol;
  DensityOperator for_oracle(after_censor.matrix(), s.composite_free_oracle.profile(), 1e-8);
  t.output_membership = membership(s.composite_free_oracle, for_oracle, s.budget);
  return t;
}

// ---------------------------------------------------------------------------
// Breakability
// ---------------------------------------------------------------------------

std::string to_string(Breakability b) {
  switch (b) {
    case Breakability::UnbreakableProved: return "UnbreakableProved";
    case Breakability::BrokenWitness: return "BrokenWitness";
    case Breakability::NoWitnessFound: return "NoWitnessFound";
  }
  return "NoWitnessFound";
}

BreakabilityVerdict breakability_analysis(const Scenario& s) {
  for (const Party& p : s.parties)
    require(is_idempotent(p.censor(), kFixTol),
            "breakability_analysis: non-idempotent censor unsupported (party " + p.label() + ")");

  const KrausChannel censor = product_censor(s);
  const FreeSetOracle& oracle = s.composite_free_oracle;
  const DimProfile joint = s.joint_profile();

  BreakabilityVerdict verdict;
  verdict.fixed_subspace = fixed_point_subspace(censor);
  const std::vector<Matrix>& basis = verdict.fixed_subspace.basis;

  auto emit_witness = [&](DensityOperator state, std::string how) -> bool {
    // A break witness must be fixed by the product censor and lie outside
    // the composite free set; refuse anything that fails either check.
    const double fix_dist = trace_distance(apply_matrix(censor, state.matrix()), state.matrix());
    if (fix_dist > kFixTol) return false;
    DensityOperator for_oracle(state.matrix(), oracle.profile(), 1e-8);
    MembershipVerdict mv = membership(oracle, for_oracle, s.budget);
    if (mv.verdict != Verdict::NonMember) return false;
    verdict.status = Breakability::BrokenWitness;
    verdict.argument = std::move(how);
    verdict.witness = std::move(state);
    verdict.witness_membership = std::move(mv);
    verdict.witness_fixed_distance = fix_dist;
    return true;
  };

  // Structural containment via the free-set projection: for affine families
  // (incoherent, twirl-invariant, classical-quantum, and their affine
  // composites; the convex incoherent composite coincides with the affine
  // one) a state is free iff the projection fixes it, so projection-invariant
  // basis elements put the whole fixed subspace inside the free set.
  const bool projection_is_exact = [&] {
    switch (oracle.kind()) {
      case FreeSetOracle::Kind::Incoherent:
      case FreeSetOracle::Kind::TwirlInvariant:
      case FreeSetOracle::Kind::ClassicalQuantum:
      case FreeSetOracle::Kind::AffineComposite:
        return true;
      case FreeSetOracle::Kind::ConvexComposite:
        return std::all_of(
            oracle.factors().begin(), oracle.factors().end(),
            [](const FreeSetOracle& f) { return f.kind() == FreeSetOracle::Kind::Incoherent; });
      default:
        return false;
    }
  }();
  if (projection_is_exact) {
    bool applicable = true;
    double worst = 0.0;
    for (const Matrix& b : basis) {
      const std::optional<Matrix> projected = free_set_projection(oracle, b);
      if (!projected.has_value()) {
        applicable = false;
        break;
      }
      worst = std::max(worst, max_abs_diff(*projected, b));
    }
    if (applicable && worst <= kFixTol) {
      verdict.status = Breakability::UnbreakableProved;
      std::ostringstream os;
      os << "every fixed basis element is invariant under the free-set projection "
         << "(max deviation " << worst << "); the fixed subspace is contained in the free set";
      verdict.argument = os.str();
      return verdict;
    }
  }

  // All-diagonal fixed basis: mixtures of product basis projectors are free
  // for incoherent, classical-quantum, and separable composites.
  if (free_set_contains_all_diagonals(oracle) && all_diagonal(basis, kFixTol)) {
    verdict.status = Breakability::UnbreakableProved;
    verdict.argument =
        "the fixed subspace is spanned by diagonal operators; every density in it is a mixture "
        "of computational product projectors, which are free";
    return verdict;
  }

  // Bipartite separability oracle with a classically block-diagonal fixed
  // basis: every fixed density is classical-quantum across the cut, hence
  // separable (the single-party entanglement censorship case).
  if (oracle.kind() == FreeSetOracle::Kind::SeparablePPT && oracle.profile().count() == 2) {
    bool block_diag = true;
    for (const Matrix& b : basis)
      if (max_block_offdiagonal(b, oracle.profile(), {0}) > kFixTol) {
        block_diag = false;
        break;
      }
    if (block_diag) {
      verdict.status = Breakability::UnbreakableProved;
      verdict.argument =
          "every fixed basis element is block-diagonal on the classical register, so every "
          "fixed density is classical-quantum and therefore separable";
      return verdict;
    }
  }

  // One-dimensional fixed subspace: the unique fixed density decides.
  if (verdict.fixed_subspace.dimension == 1) {
    const Matrix& b = basis.front();
    const Complex tr = b.trace();
    if (std::abs(tr) > 1e-10) {
      Matrix candidate = hermitian_part(b / tr);
      if (is_density(candidate, joint, 1e-8).ok()) {
        DensityOperator unique(candidate, joint, 1e-8);
        DensityOperator for_oracle(unique.matrix(), oracle.profile(), 1e-8);
        const MembershipVerdict mv = membership(oracle, for_oracle, s.budget);
        if (mv.verdict == Verdict::Member) {
          verdict.status = Breakability::UnbreakableProved;
          verdict.argument = "the fixed subspace contains exactly one density operator and it is "
                             "free: " + mv.reason;
          return verdict;
        }
        if (mv.verdict == Verdict::NonMember &&
            emit_witness(unique, "the unique fixed density operator lies outside the free set"))
          return verdict;
      }
    }
  }

  // Known breaking construction for classical-quantum censors (Bell pair
  // across the quantum registers of the first two parties).
  if (std::optional<DensityOperator> breaking = cq_breaking_state(s); breaking.has_value()) {
    if (emit_witness(std::move(*breaking),
                     "classical-quantum breaking construction: classical registers in basis "
                     "states, Bell pair across the quantum registers"))
      return verdict;
  }

  // Sampled search: project Ginibre states onto the fixed subspace, keep the
  // valid densities, and test membership.
  for (int trial = 0; trial < s.budget; ++trial) {
    ++verdict.samples_tried;
    const DensityOperator g =
        random_density(joint.total(), s.seed + static_cast<std::uint64_t>(trial));
    Matrix projected = hermitian_part(verdict.fixed_subspace.project(g.matrix()));
    const double tr = std::real(projected.trace());
    if (std::abs(tr) < 1e-10) continue;
    projected /= tr;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(projected, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) continue;  // discard non-PSD projections
    if (!is_density(projected, joint, 1e-8).ok()) continue;
    ++verdict.samples_valid;
    if (emit_witness(DensityOperator(projected, joint, 1e-8),
                     "sampled state from the fixed subspace lies outside the free set"))
      return verdict;
  }

  verdict.status = Breakability::NoWitnessFound;
  std::ostringstream os;
  os << "no structural containment argument applies and " << verdict.samples_valid
     << " sampled fixed-subspace densities (of " << verdict.samples_tried
     << " projections) all stayed inside the free set or were undecidable";
  verdict.argument = os.str();
  return verdict;
}

EbReport eb_unbreakability_check(const Scenario& s) {
  EbReport report;
  report.applicable = composite_is_convex(s.composite_free_oracle);
  if (!report.applicable) {
    report.note = "composite free oracle is not a convex hull; the entanglement-breaking "
                  "criterion does not apply";
    return report;
  }

  report.all_entanglement_breaking = true;
  for (const Party& p : s.parties) {
    const EbVerdict v = is_entanglement_breaking(p.censor());
    report.party_verdicts.push_back(v);
    if (v == EbVerdict::Inconclusive) report.any_inconclusive = true;
    if (v != EbVerdict::Yes) report.all_entanglement_breaking = false;
  }

  const BreakabilityVerdict analysis = breakability_analysis(s);
  report.analysis_status = analysis.status;

  if (report.any_inconclusive) {
    report.note = "entanglement-breaking classification inconclusive for at least one censor; "
                  "no assertion made";
    return report;
  }
  if (!report.all_entanglement_breaking) {
    report.note = "not every censor is entanglement breaking; the criterion makes no assertion";
    return report;
  }

  report.asserted = Breakability::UnbreakableProved;
  report.consistent = analysis.status == Breakability::UnbreakableProved;
  report.note = report.consistent
                    ? "every censor is entanglement breaking; unbreakable, and the fixed-subspace "
                      "analysis agrees"
                    : "HARD FAILURE: entanglement-breaking censors but the fixed-subspace "
                      "analysis returned " + to_string(analysis.status);
  return report;
}

// ---------------------------------------------------------------------------
// Noise interplay
// ---------------------------------------------------------------------------

namespace {

/// Deterministic convex weights on the simplex (normalized exponentials).
Eigen::VectorXd simplex_weights(GaussianStream& stream, int n) {
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) {
    const double g = stream.next();
    w(j) = std::exp(-0.5 * g * g);  // positive, bounded
  }
  w /= w.sum();
  return w;
}

Matrix convex_mixture(const GeneratorSet& gens, const Eigen::VectorXd& w) {
  Matrix out = Matrix::Zero(gens.profile().total(), gens.profile().total());
  for (int j = 0; j < gens.size(); ++j)
    out += Complex(w(j), 0.0) * gens.states()[static_cast<std::size_t>(j)].matrix();
  return out;
}

constexpr std::uint64_t kMixtureSeed = 0x5eedc0de00000003ull;

}  // namespace

CommutationReport commutation_check(const KrausChannel& noise, const KrausChannel& censor,
                                    const GeneratorSet& free_gens, int samples) {
  require(noise.in_dim() == censor.in_dim() && noise.out_dim() == censor.in_dim(),
          "commutation_check: dimension mismatch");
  require(free_gens.profile().total() == censor.in_dim(),
          "commutation_check: generator dimension mismatch");

  CommutationReport report;
  auto check = [&](const Matrix& sigma) {
    const Matrix censor_noise = apply_matrix(censor, apply_matrix(noise, sigma));
    const Matrix noise_censor = apply_matrix(noise, apply_matrix(censor, sigma));
    const double dist = trace_distance(censor_noise, noise_censor);
    ++report.checked;
    if (dist > report.max_distance) {
      report.max_distance = dist;
      if (dist > kFixTol) {
        report.witness = sigma;
        report.censor_after_noise = censor_noise;
        report.noise_after_censor = noise_censor;
      }
    }
  };

  for (const DensityOperator& g : free_gens.states()) check(g.matrix());
  GaussianStream stream(kMixtureSeed);
  for (int trial = 0; trial < samples; ++trial)
    check(convex_mixture(free_gens, simplex_weights(stream, free_gens.size())));

  report.pass = report.max_distance <= kFixTol;
  return report;
}

NonGeneratingReport nongenerating_check(const KrausChannel& noise, const FreeSetOracle& free,
                                        const GeneratorSet& free_gens, int samples) {
  require(noise.in_dim() == free_gens.profile().total(),
          "nongenerating_check: generator dimension mismatch");
  require(free.profile().total() == noise.out_dim(),
          "nongenerating_check: oracle dimension mismatch");

  NonGeneratingReport report;
  auto check = [&](const Matrix& sigma) {
    const Matrix out = hermitian_part(apply_matrix(noise, sigma));
    DensityOperator out_state(out, free.profile(), 1e-8);
    const MembershipVerdict v = membership(free, out_state);
    ++report.checked;
    switch (v.verdict) {
      case Verdict::Member: ++report.member; break;
      case Verdict::Inconclusive: ++report.inconclusive; break;
      case Verdict::NonMember:
        ++report.nonmember;
        if (!report.witness.has_value()) {
          report.witness = sigma;
          report.witness_reason = v.reason;
        }
        break;
    }
  };

  for (const DensityOperator& g : free_gens.states()) check(g.matrix());
  GaussianStream stream(kMixtureSeed);
  for (int trial = 0; trial < samples; ++trial)
    check(convex_mixture(free_gens, simplex_weights(stream, free_gens.size())));

  report.pass = report.member == report.checked;
  return report;
}

KrausChannel swap_channel(int x_dim, int y_dim) {
  require(x_dim >= 1 && y_dim >= 1, "swap_channel: dimensions must be positive");
  require(x_dim == y_dim, "swap_channel: factors must have equal dimension");
  const DimProfile profile({x_dim, y_dim});
  return KrausChannel({permutation_unitary(profile, {1, 0})}, profile, profile);
}

CorrectionReport correction_effect_probe(const KrausChannel& noise, const KrausChannel& censor,
                                         const DensityOperator& sigma) {
  require(noise.in_dim() == sigma.dim() && censor.in_dim() == sigma.dim(),
          "correction_effect_probe: dimension mismatch");
  require(is_fixed_point(censor, sigma, kFixTol),
          "correction_effect_probe: sigma is not authorized (not fixed by the censor)");

  CorrectionReport report;
  const Matrix noisy = apply_matrix(noise, sigma.matrix());
  report.noisy_distance = trace_distance(noisy, sigma.matrix());
  report.censored_distance = trace_distance(apply_matrix(censor, noisy), sigma.matrix());
  report.censor_corrects = report.censored_distance < report.noisy_distance - 1e-12;
  return report;
}

}  // namespace censorlab

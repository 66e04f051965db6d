// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] must point at the censorlab CLI binary (used by the
// determinism criterion).

#include "censorlab/censors.hpp"
#include "censorlab/channels.hpp"
#include "censorlab/protocol.hpp"
#include "censorlab/qmath.hpp"
#include "censorlab/resources.hpp"
#include "censorlab/scenario.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace censorlab;
using ordered_json = nlohmann::ordered_json;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<void()>& body) {
  try {
    body();
    std::cout << "[PASS] criterion " << number << ": " << name << "\n";
  } catch (const std::exception& e) {
    ++g_failures;
    std::cout << "[FAIL] criterion " << number << ": " << name << " -- " << e.what() << "\n";
  }
}

void require(bool cond, const std::string& message) {
  if (!cond) throw std::runtime_error(message);
}

Matrix plus_state() {
  Vector v(2);
  v << Complex(1, 0), Complex(1, 0);
  v /= std::sqrt(2.0);
  return v * v.adjoint();
}

Matrix bell_state(int which) {
  Vector v = Vector::Zero(4);
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 0: v(0) = s; v(3) = s; break;
    case 1: v(0) = s; v(3) = -s; break;
    case 2: v(1) = s; v(2) = s; break;
    default: v(1) = s; v(2) = -s; break;
  }
  return v * v.adjoint();
}

std::string run_cli(const std::string& binary, const std::string& args, int& exit_code) {
  const std::string command = binary + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  require(pipe != nullptr, "cannot spawn CLI: " + command);
  std::string output;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  const int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

std::string strip_timing(const std::string& report) {
  ordered_json doc = ordered_json::parse(report);
  doc.erase("timing_ms");
  return doc.dump(2);
}

// -------------------------------------------------------------------------
// Criteria
// -------------------------------------------------------------------------

void criterion1_coherence_unbreakable() {
  const auto start = std::chrono::steady_clock::now();
  for (int n = 1; n <= 3; ++n) {
    std::vector<Party> parties;
    std::vector<FreeSetOracle> factors;
    for (int k = 0; k < n; ++k) {
      parties.push_back(
          Party::standard("A" + std::to_string(k + 1), CensorSpec{CensorSpec::Dephasing{2}}));
      factors.push_back(FreeSetOracle::incoherent(2));
    }
    const int dim = 1 << n;
    Scenario s(parties, DensityOperator(identity(dim) / dim,
                                        DimProfile(std::vector<int>(static_cast<std::size_t>(n), 2))),
               FreeSetOracle::affine_composite(factors));
    const BreakabilityVerdict v = breakability_analysis(s);
    require(v.fixed_subspace.dimension == dim,
            "N=" + std::to_string(n) + ": fixed dimension " +
                std::to_string(v.fixed_subspace.dimension) + " != " + std::to_string(dim));
    for (const Matrix& b : v.fixed_subspace.basis)
      require(max_offdiagonal(b) <= 1e-8, "N=" + std::to_string(n) + ": non-diagonal basis element");
    require(v.status == Breakability::UnbreakableProved,
            "N=" + std::to_string(n) + ": expected UnbreakableProved, got " + to_string(v.status));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s exceeds 5s");
}

void criterion2_entanglement_broken() {
  const LoadedScenario loaded = load_scenario(find_preset("entanglement_break")->json_text);
  const Scenario& s = loaded.scenario;

  std::vector<KrausChannel> censors;
  for (const Party& p : s.parties) censors.push_back(p.censor());
  const KrausChannel pair = tensor_channels(censors);
  const Matrix out = apply_matrix(pair, s.input_state.matrix());
  require(trace_distance(out, s.input_state.matrix()) <= 1e-12,
          "breaking state altered by the censor pair");

  // Partial transpose across the receiver cut B1 | B2 (subsystems {2, 3}).
  const Matrix pt = partial_transpose(out, s.joint_profile(), std::vector<int>{2, 3});
  const double min_eig = eig_hermitian(hermitian_part(pt)).values.minCoeff();
  require(std::abs(min_eig - (-0.5)) <= 1e-9,
          "PT minimum eigenvalue " + std::to_string(min_eig) + " != -0.5");

  const BreakabilityVerdict v = breakability_analysis(s);
  require(v.status == Breakability::BrokenWitness,
          "expected BrokenWitness, got " + to_string(v.status));
}

void criterion3_replacement_unbreakable() {
  Matrix sigma_m = Matrix::Zero(2, 2);
  sigma_m(0, 0) = 0.7;
  sigma_m(1, 1) = 0.3;
  const DensityOperator sigma(sigma_m, DimProfile({2}));

  for (int n = 1; n <= 3; ++n) {
    std::vector<Party> parties;
    std::vector<FreeSetOracle> factors;
    for (int k = 0; k < n; ++k) {
      parties.emplace_back("A" + std::to_string(k + 1), CensorSpec{CensorSpec::Replacement{sigma}},
                           std::nullopt, GeneratorSet({sigma}), FreeSetOracle::incoherent(2));
      factors.push_back(FreeSetOracle::incoherent(2));
    }
    const int dim = 1 << n;
    Scenario s(parties, DensityOperator(identity(dim) / dim,
                                        DimProfile(std::vector<int>(static_cast<std::size_t>(n), 2))),
               FreeSetOracle::convex_composite(factors));

    const BreakabilityVerdict v = breakability_analysis(s);
    require(v.fixed_subspace.dimension == 1,
            "N=" + std::to_string(n) + ": fixed dimension != 1");
    Matrix product = sigma.matrix();
    for (int k = 1; k < n; ++k) product = kron(product, sigma.matrix());
    require(max_abs_diff(v.fixed_subspace.project(product), product) <= 1e-9,
            "N=" + std::to_string(n) + ": fixed ray differs from sigma^(x)N");
    require(v.status == Breakability::UnbreakableProved,
            "N=" + std::to_string(n) + ": expected UnbreakableProved");

    const EbReport eb = eb_unbreakability_check(s);
    require(eb.applicable && eb.asserted.has_value() &&
                *eb.asserted == Breakability::UnbreakableProved && eb.consistent,
            "N=" + std::to_string(n) + ": EB check disagrees with the analysis");
  }
}

void criterion4_eb_classification() {
  const struct {
    const char* name;
    KrausChannel channel;
    EbVerdict expected;
  } cases[] = {
      {"dephasing", dephasing_channel(2), EbVerdict::Yes},
      {"replacement", replacement_channel(DensityOperator(0.5 * identity(2), DimProfile({2}))),
       EbVerdict::Yes},
      {"identity", identity_channel(DimProfile({2})), EbVerdict::No},
      {"cq", cq_censor_channel(2, 2), EbVerdict::No},
  };
  for (const auto& c : cases) {
    const EbVerdict got = is_entanglement_breaking(c.channel);
    require(got != EbVerdict::Inconclusive, std::string(c.name) + ": Inconclusive classification");
    require(got == c.expected, std::string(c.name) + ": wrong classification " + to_string(got));
  }
}

void criterion5_twirl_identities() {
  const double d1 = superoperator_distance(twirl_channel(iz_group()), dephasing_channel(2));
  require(d1 <= 1e-12, "twirl{I,Z} vs dephasing(2): distance " + std::to_string(d1));

  const KrausChannel replace_mixed =
      replacement_channel(DensityOperator(0.5 * identity(2), DimProfile({2})));
  const double d2 = superoperator_distance(twirl_channel(pauli_group_1q()), replace_mixed);
  require(d2 <= 1e-12, "pauli twirl vs replacement toward I/2: distance " + std::to_string(d2));
}

void criterion6_noise_commutation() {
  // 200 sampled resource non-generating noises, each checked on 200 free
  // (diagonal) states of a qubit.
  const KrausChannel deph = dephasing_channel(2);
  GaussianStream stream(0xacce97);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    KrausChannel noise = [&]() -> KrausChannel {
      switch (t % 3) {
        case 0: {  // classical stochastic map on the basis
          const double a = 0.5 + 0.5 * std::tanh(stream.next());
          const double b = 0.5 + 0.5 * std::tanh(stream.next());
          std::vector<Matrix> kraus;
          const double p[2][2] = {{a, 1 - a}, {b, 1 - b}};
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              kraus.push_back(std::sqrt(p[i][j]) * basis_ket(2, j) * basis_ket(2, i).adjoint());
          return KrausChannel(std::move(kraus), DimProfile({2}), DimProfile({2}));
        }
        case 1: {  // diagonal unitary
          Matrix u = Matrix::Zero(2, 2);
          u(0, 0) = std::polar(1.0, stream.next());
          u(1, 1) = std::polar(1.0, stream.next());
          return KrausChannel({u}, DimProfile({2}), DimProfile({2}));
        }
        default: {  // bit flip mixed with dephasing
          const double p = 0.5 + 0.5 * std::tanh(stream.next());
          Matrix x = Matrix::Zero(2, 2);
          x(0, 1) = x(1, 0) = 1.0;
          std::vector<Matrix> kraus{std::sqrt(p) * identity(2), std::sqrt(1 - p) * x};
          return KrausChannel(std::move(kraus), DimProfile({2}), DimProfile({2}));
        }
      }
    }();
    for (int k = 0; k < 200; ++k) {
      const double q = 0.5 + 0.5 * std::tanh(stream.next());
      Matrix sigma = Matrix::Zero(2, 2);
      sigma(0, 0) = q;
      sigma(1, 1) = 1 - q;
      const Matrix lhs = apply_matrix(deph, apply_matrix(noise, sigma));
      const Matrix rhs = apply_matrix(noise, apply_matrix(deph, sigma));
      worst = std::max(worst, trace_distance(lhs, rhs));
    }
  }
  require(worst <= 1e-8, "RD commutation violated: max distance " + std::to_string(worst));

  // The cq censor and swap noise fail commutation; the recorded output must
  // match the closed-form result on sigma = |0><0| (x) |+><+|.
  const CommutationReport r =
      commutation_check(swap_channel(2, 2), cq_censor_channel(2, 2),
                        authorized_generators(CensorSpec{CensorSpec::CqCensor{2, 2}}), 100);
  require(!r.pass, "cq censor + swap unexpectedly commute");
  require(r.witness.has_value(), "no commutation witness recorded");

  const Matrix instance = kron(basis_projector(2, 0), plus_state());
  const Matrix out = apply_matrix(compose(cq_censor_channel(2, 2), swap_channel(2, 2)), instance);
  const Matrix expected = kron(0.5 * identity(2), basis_projector(2, 0));
  require(max_abs_diff(out, expected) <= 1e-10, "swap instance formula mismatch");
}

void criterion7_separability_calibration() {
  const FreeSetOracle sep = FreeSetOracle::separable_ppt(DimProfile({2, 2}));
  auto werner = [](double p) {
    return DensityOperator(p * bell_state(0) + (1.0 - p) * 0.25 * identity(4), DimProfile({2, 2}));
  };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (membership(sep, werner(mid)).verdict == Verdict::Member ? lo : hi) = mid;
  }
  const double threshold = 0.5 * (lo + hi);
  require(std::abs(threshold - 1.0 / 3.0) <= 1e-6,
          "Werner threshold " + std::to_string(threshold) + " != 1/3");

  for (int which = 0; which < 4; ++which) {
    const MembershipVerdict v = membership(sep, DensityOperator(bell_state(which), DimProfile({2, 2})));
    require(v.verdict == Verdict::NonMember, "Bell state classified " + to_string(v.verdict));
    require(v.pt_min_eigenvalue.has_value() && std::abs(*v.pt_min_eigenvalue + 0.5) <= 1e-9,
            "Bell certificate eigenvalue mismatch");
  }
}

void criterion8_hull_consistency() {
  int convex_members = 0;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    const int dim = 2 + static_cast<int>(trial % 3);
    const int n_gens = 2 + static_cast<int>(trial % 5);
    std::vector<DensityOperator> gens;
    for (int g = 0; g < n_gens; ++g)
      gens.push_back(random_density(dim, 7777 * trial + static_cast<std::uint64_t>(g)));
    const GeneratorSet gen_set(gens);

    DensityOperator rho = random_density(dim, 31337 * trial + 5);
    if (trial % 2 == 0) {  // half the stream lies inside the convex hull
      GaussianStream stream(trial);
      std::vector<double> w;
      double total = 0.0;
      for (int g = 0; g < n_gens; ++g) {
        w.push_back(std::abs(stream.next()) + 1e-3);
        total += w.back();
      }
      Matrix mix = Matrix::Zero(dim, dim);
      for (int g = 0; g < n_gens; ++g)
        mix += Complex(w[static_cast<std::size_t>(g)] / total, 0.0) *
               gens[static_cast<std::size_t>(g)].matrix();
      rho = DensityOperator(hermitian_part(mix), DimProfile({dim}), 1e-8);
    }

    const MembershipVerdict convex = convex_hull_membership(rho, gen_set, 1e-8);
    if (convex.verdict != Verdict::Member) continue;
    ++convex_members;

    const MembershipVerdict affine = affine_hull_membership(rho, gen_set, 1e-8);
    require(affine.verdict == Verdict::Member,
            "trial " + std::to_string(trial) + ": convex member but affine non-member");

    for (const MembershipVerdict* v : {&convex, &affine}) {
      Matrix recon = Matrix::Zero(dim, dim);
      for (int g = 0; g < n_gens; ++g)
        recon += Complex((*v->hull_coefficients)(g), 0.0) * gens[static_cast<std::size_t>(g)].matrix();
      require(max_abs_diff(recon, rho.matrix()) <= 1e-8,
              "trial " + std::to_string(trial) + ": certificate fails re-substitution");
      require(std::abs(v->hull_coefficients->sum() - 1.0) <= 1e-8,
              "trial " + std::to_string(trial) + ": coefficients do not sum to 1");
    }
  }
  require(convex_members >= 200, "only " + std::to_string(convex_members) +
                                     " convex members exercised; sampling too thin");
}

void criterion9_determinism(const std::string& cli) {
  for (const Preset& p : presets()) {
    const std::string a = run_report(load_scenario(p.json_text));
    const std::string b = run_report(load_scenario(p.json_text));
    require(strip_timing(a) == strip_timing(b), p.name + ": in-process reports differ");
  }
  // End to end through the binary, including process startup and JSON I/O.
  for (const std::string name : {"coherence_censorship", "entanglement_break"}) {
    int code_a = 0, code_b = 0;
    const std::string a = run_cli(cli, "run " + name, code_a);
    const std::string b = run_cli(cli, "run " + name, code_b);
    require(code_a == 0 && code_b == 0, name + ": CLI exit codes " + std::to_string(code_a) + "/" +
                                            std::to_string(code_b));
    require(strip_timing(a) == strip_timing(b), name + ": CLI reports differ");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance_suite <path-to-censorlab-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];

  criterion(1, "coherence censorship unbreakable for N in {1,2,3}", criterion1_coherence_unbreakable);
  criterion(2, "entanglement censorship broken by the preset state", criterion2_entanglement_broken);
  criterion(3, "replacement censorship unbreakable, fixed ray sigma^N", criterion3_replacement_unbreakable);
  criterion(4, "entanglement-breaking classification of the four channels", criterion4_eb_classification);
  criterion(5, "twirl identities at superoperator level", criterion5_twirl_identities);
  criterion(6, "noise commutation: RD passes, cq+swap fails with the formula", criterion6_noise_commutation);
  criterion(7, "separability calibration: Werner threshold and Bell certificates", criterion7_separability_calibration);
  criterion(8, "hull consistency on 500 random pairs", criterion8_hull_consistency);
  criterion(9, "byte-identical preset reports across runs",
            [&] { criterion9_determinism(cli); });

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 9 criteria passed\n";
  return 0;
}

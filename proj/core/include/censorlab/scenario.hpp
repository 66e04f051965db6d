#pragma once

#include "censorlab/protocol.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace censorlab {

inline constexpr int kScenarioFileVersion = 1;
inline constexpr char kToolVersion[] = "1.0.0";

/// Malformed scenario description (bad JSON, unknown kind, missing field).
/// The CLI maps this to exit code 2; core validation failures
/// (std::invalid_argument: non-density input, dimension cap, bad group) map
/// to exit code 3.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed scenario together with the canonical serialization its content
/// digest is computed from.
struct LoadedScenario {
  Scenario scenario;
  std::string canonical_json;
  std::uint64_t digest = 0;
};

/// Parses a version-1 scenario file (JSON text). seed_override replaces the
/// file's seed, budget_override the file's sampling budget.
LoadedScenario load_scenario(const std::string& json_text,
                             std::optional<std::uint64_t> seed_override = std::nullopt,
                             std::optional<int> budget_override = std::nullopt);

/// Runs the protocol, the breakability analysis, the entanglement-breaking
/// check for convex composite oracles, and the per-party noise checks, and
/// serializes everything as an indented JSON report. The report is
/// byte-identical across runs with the same file and seed except for the
/// trailing "timing_ms" field.
std::string run_report(const LoadedScenario& loaded);

/// Pass/fail table for one censor: CPTP, idempotence, entanglement-breaking
/// classification, resource-destroying and freeness-preserving checks.
std::string verify_report(const std::string& censor_token,
                          const std::optional<std::string>& free_token, int samples,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

struct Preset {
  std::string name;
  std::string description;
  std::string json_text;
};

/// Packaged scenarios in stable (lexicographic) order. Names are stable API.
const std::vector<Preset>& presets();

std::optional<Preset> find_preset(const std::string& name);

// ---------------------------------------------------------------------------
// Spec tokens (shared by `verify` flags and scenario files)
// ---------------------------------------------------------------------------

/// "dephasing:3", "twirl:pauli1", "cq:2x2", "replacement:max_mixed:2".
CensorSpec parse_censor_token(const std::string& token);

/// "incoherent:2", "twirl_invariant:iz", "classical_quantum:2x2",
/// "separable_ppt:2x2".
FreeSetOracle parse_oracle_token(const std::string& token);

/// Canonical spanning generators of a free set, used to sample free states
/// (products of per-factor density bases for composite and PPT kinds).
GeneratorSet canonical_free_generators(const FreeSetOracle& oracle);

/// FNV-1a 64-bit content hash.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace censorlab

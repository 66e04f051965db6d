#include "censorlab/scenario.hpp"

namespace censorlab {

namespace {

const char kCoherenceCensorship[] = R"json({
  "version": 1,
  "description": "Coherence censorship via the completely dephasing channel; unbreakable.",
  "seed": 11,
  "budget": 256,
  "parties": [
    {"label": "A1", "censor": {"kind": "dephasing", "dim": 2}}
  ],
  "input_state": {"preset": "max_coherent"},
  "oracles": {
    "composite": {"kind": "affine_composite", "factors": [
      {"kind": "incoherent", "dim": 2}
    ]}
  }
})json";

const char kEntanglementBreak[] = R"json({
  "version": 1,
  "description": "Two senders break entanglement censorship: classical registers in basis states, a Bell pair across the quantum registers.",
  "seed": 13,
  "budget": 256,
  "parties": [
    {"label": "A1", "censor": {"kind": "cq", "x_dim": 2, "y_dim": 2}},
    {"label": "A2", "censor": {"kind": "cq", "x_dim": 2, "y_dim": 2}}
  ],
  "input_state": {"preset": "breaking_state_2x2"},
  "oracles": {
    "composite": {"kind": "convex_composite", "factors": [
      {"kind": "separable_ppt", "dims": [2, 2]},
      {"kind": "separable_ppt", "dims": [2, 2]}
    ]}
  }
})json";

const char kReferenceFrameTwirl[] = R"json({
  "version": 1,
  "description": "Reference-frame censorship by G-twirling over {I, Z}; unbreakable.",
  "seed": 17,
  "budget": 256,
  "parties": [
    {"label": "A1", "censor": {"kind": "twirl", "group": "iz"}},
    {"label": "A2", "censor": {"kind": "twirl", "group": "iz"}}
  ],
  "input_state": {"preset": "max_coherent"},
  "oracles": {
    "composite": {"kind": "affine_composite", "factors": [
      {"kind": "twirl_invariant", "group": "iz"},
      {"kind": "twirl_invariant", "group": "iz"}
    ]}
  }
})json";

const char kReplacementMinimal[] = R"json({
  "version": 1,
  "description": "Minimal construction: every message is replaced by one fixed free state; entanglement breaking, hence unbreakable.",
  "seed": 23,
  "budget": 256,
  "parties": [
    {"label": "A1",
     "censor": {"kind": "replacement", "target": {"preset": "diag", "probs": [0.7, 0.3]}},
     "free": {"kind": "incoherent", "dim": 2}},
    {"label": "A2",
     "censor": {"kind": "replacement", "target": {"preset": "diag", "probs": [0.7, 0.3]}},
     "free": {"kind": "incoherent", "dim": 2}}
  ],
  "input_state": {"preset": "max_coherent"},
  "oracles": {
    "composite": {"kind": "convex_composite", "factors": [
      {"kind": "incoherent", "dim": 2},
      {"kind": "incoherent", "dim": 2}
    ]}
  }
})json";

const char kSwapNoise[] = R"json({
  "version": 1,
  "description": "Classical-quantum censorship with swap noise: resource non-generating noise that fails to commute with the censor.",
  "seed": 19,
  "budget": 256,
  "parties": [
    {"label": "A1",
     "censor": {"kind": "cq", "x_dim": 2, "y_dim": 2},
     "noise": {"kind": "swap", "x_dim": 2, "y_dim": 2}}
  ],
  "input_state": {"preset": "cq_plus"},
  "oracles": {
    "composite": {"kind": "separable_ppt", "dims": [2, 2]}
  }
})json";

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {"coherence_censorship",
       "dephasing censor on one qubit sender; |+> is flattened, censorship unbreakable",
       kCoherenceCensorship},
      {"entanglement_break",
       "two cq-censored senders smuggle a Bell pair through the quantum registers",
       kEntanglementBreak},
      {"reference_frame_twirl",
       "two senders twirled over {I, Z}; phase information is erased, censorship unbreakable",
       kReferenceFrameTwirl},
      {"replacement_minimal",
       "replacement censors toward a fixed diagonal state; entanglement breaking and unbreakable",
       kReplacementMinimal},
      {"swap_noise",
       "cq censor behind swap noise; non-entangling noise that the censor turns destructive",
       kSwapNoise},
  };
  return list;
}

std::optional<Preset> find_preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace censorlab

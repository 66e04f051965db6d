#include "censorlab/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace censorlab {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kVerifySeed = 1234;

[[noreturn]] void fail_parse(const std::string& message) { throw ParseError(message); }

const ordered_json& get_field(const ordered_json& obj, const std::string& key,
                              const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    fail_parse("missing field '" + key + "' in " + where);
  return obj.at(key);
}

int get_int(const ordered_json& obj, const std::string& key, const std::string& where) {
  const ordered_json& v = get_field(obj, key, where);
  if (!v.is_number_integer()) fail_parse("field '" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

std::string get_string(const ordered_json& obj, const std::string& key,
                       const std::string& where) {
  const ordered_json& v = get_field(obj, key, where);
  if (!v.is_string()) fail_parse("field '" + key + "' in " + where + " must be a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------
// Matrix and state parsing
// ---------------------------------------------------------------------------

Matrix parse_matrix(const ordered_json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) fail_parse("matrix in " + where + " must be a nonempty array");
  const int n = static_cast<int>(rows.size());
  Matrix m(n, static_cast<int>(rows.front().size()));
  for (int r = 0; r < n; ++r) {
    const ordered_json& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols())
      fail_parse("matrix row " + std::to_string(r) + " in " + where + " has inconsistent length");
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const ordered_json& entry = row.at(static_cast<std::size_t>(c));
      if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
          !entry.at(1).is_number())
        fail_parse("matrix entry (" + std::to_string(r) + "," + std::to_string(c) + ") in " +
                   where + " must be a [re, im] pair");
      m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

DimProfile parse_dims(const ordered_json& dims, const std::string& where) {
  if (!dims.is_array() || dims.empty()) fail_parse("'dims' in " + where + " must be a nonempty array");
  std::vector<int> d;
  for (const ordered_json& v : dims) {
    if (!v.is_number_integer()) fail_parse("'dims' in " + where + " must contain integers");
    d.push_back(v.get<int>());
  }
  return DimProfile(d);
}

Matrix max_coherent_state(int dim) {
  Vector psi = Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  return psi * psi.adjoint();
}

Matrix bell_phi_plus_state() {
  Vector psi = (kron(basis_ket(2, 0), basis_ket(2, 0)) + kron(basis_ket(2, 1), basis_ket(2, 1))) /
               std::sqrt(2.0);
  return psi * psi.adjoint();
}

/// |0><0|_X1 (x) |1><1|_X2 (x) |phi+><phi+|_{Y1 Y2} in the X1 Y1 X2 Y2 party
/// ordering (each party a qubit pair).
Matrix breaking_state_2x2() {
  Vector psi;
  for (int k = 0; k < 2; ++k) {
    Vector branch = kron(basis_ket(2, 0), basis_ket(2, k));   // X1, Y1
    branch = kron(branch, kron(basis_ket(2, 1), basis_ket(2, k)));  // X2, Y2
    psi = (k == 0) ? branch : Vector(psi + branch);
  }
  psi /= std::sqrt(2.0);
  return psi * psi.adjoint();
}

Matrix cq_plus_state() {
  Vector plus = (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0);
  return kron(basis_projector(2, 0), plus * plus.adjoint());
}

/// State spec: {"preset": "..."} (optionally with "probs") or
/// {"matrix": [...], "dims": [...]}; `expected` supplies the profile when
/// the description does not carry one.
DensityOperator resolve_state(const ordered_json& spec, std::optional<DimProfile> expected,
                              const std::string& where) {
  if (spec.is_string())  // bare preset name
    return resolve_state(ordered_json{{"preset", spec.get<std::string>()}}, std::move(expected),
                         where);
  if (!spec.is_object()) fail_parse("state spec in " + where + " must be an object or preset name");
  if (spec.contains("preset")) {
    const std::string name = get_string(spec, "preset", where);
    if (name == "diag") {
      const ordered_json& probs = get_field(spec, "probs", where);
      if (!probs.is_array() || probs.empty())
        fail_parse("'probs' in " + where + " must be a nonempty array");
      Matrix m = Matrix::Zero(static_cast<int>(probs.size()), static_cast<int>(probs.size()));
      for (std::size_t i = 0; i < probs.size(); ++i)
        m(static_cast<int>(i), static_cast<int>(i)) = Complex(probs.at(i).get<double>(), 0.0);
      DimProfile profile = expected.has_value() && expected->total() == m.rows()
                               ? *expected
                               : DimProfile({static_cast<int>(m.rows())});
      return DensityOperator(m, profile);
    }
    if (!expected.has_value() && spec.contains("dims"))
      expected = parse_dims(spec.at("dims"), where);
    if (!expected.has_value())
      fail_parse("state preset '" + name + "' in " + where + " needs a 'dims' field");
    const int d = expected->total();
    if (name == "max_coherent") return DensityOperator(max_coherent_state(d), *expected);
    if (name == "max_mixed") return DensityOperator(identity(d) / static_cast<double>(d), *expected);
    if (name == "bell_phi_plus") {
      if (d != 4) fail_parse("'bell_phi_plus' needs total dimension 4 in " + where);
      return DensityOperator(bell_phi_plus_state(), *expected);
    }
    if (name == "breaking_state_2x2") {
      if (d != 16) fail_parse("'breaking_state_2x2' needs total dimension 16 in " + where);
      return DensityOperator(breaking_state_2x2(), *expected);
    }
    if (name == "cq_plus") {
      if (d != 4) fail_parse("'cq_plus' needs total dimension 4 in " + where);
      return DensityOperator(cq_plus_state(), *expected);
    }
    fail_parse("unknown state preset '" + name + "' in " + where);
  }
  if (spec.contains("matrix")) {
    Matrix m = parse_matrix(spec.at("matrix"), where);
    DimProfile profile = spec.contains("dims") ? parse_dims(spec.at("dims"), where)
                         : expected.has_value()
                             ? *expected
                             : DimProfile({static_cast<int>(m.rows())});
    return DensityOperator(std::move(m), std::move(profile));
  }
  fail_parse("state spec in " + where + " needs 'preset' or 'matrix'");
}

// ---------------------------------------------------------------------------
// Censor / noise / oracle specs
// ---------------------------------------------------------------------------

CensorSpec parse_censor_json(const ordered_json& spec, const std::string& where) {
  const std::string kind = get_string(spec, "kind", where);
  if (kind == "dephasing") return CensorSpec{CensorSpec::Dephasing{get_int(spec, "dim", where)}};
  if (kind == "twirl")
    return CensorSpec{CensorSpec::Twirl{named_group(get_string(spec, "group", where))}};
  if (kind == "cq")
    return CensorSpec{
        CensorSpec::CqCensor{get_int(spec, "x_dim", where), get_int(spec, "y_dim", where)}};
  if (kind == "replacement")
    return CensorSpec{CensorSpec::Replacement{
        resolve_state(get_field(spec, "target", where), std::nullopt, where + " target")}};
  fail_parse("unknown censor kind '" + kind + "' in " + where);
}

KrausChannel parse_noise_json(const ordered_json& spec, const DimProfile& party_profile,
                              const std::string& where) {
  const std::string kind = get_string(spec, "kind", where);
  if (kind == "swap") return swap_channel(get_int(spec, "x_dim", where), get_int(spec, "y_dim", where));
  if (kind == "unitary") {
    Matrix u = parse_matrix(get_field(spec, "matrix", where), where);
    if (u.rows() != u.cols() || u.rows() != party_profile.total())
      fail_parse("unitary noise in " + where + " has the wrong dimension");
    if (max_abs_diff(u.adjoint() * u, identity(party_profile.total())) > 1e-9)
      throw std::invalid_argument("noise in " + where + " is not unitary");
    return KrausChannel({std::move(u)}, party_profile, party_profile);
  }
  const int d = party_profile.total();
  if (kind == "depolarizing") {
    const double p = get_field(spec, "p", where).get<double>();
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing p must be in [0, 1]");
    std::vector<Matrix> kraus{std::sqrt(1.0 - p) * identity(d)};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        kraus.push_back(std::sqrt(p / d) * basis_ket(d, i) * basis_ket(d, j).adjoint());
    return KrausChannel(std::move(kraus), party_profile, party_profile);
  }
  if (kind == "partial_dephasing") {
    const double p = get_field(spec, "p", where).get<double>();
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("partial_dephasing p must be in [0, 1]");
    std::vector<Matrix> kraus{std::sqrt(1.0 - p) * identity(d)};
    for (int x = 0; x < d; ++x) kraus.push_back(std::sqrt(p) * basis_projector(d, x));
    return KrausChannel(std::move(kraus), party_profile, party_profile);
  }
  if (kind == "mix_replace") {
    const double p = get_field(spec, "p", where).get<double>();
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("mix_replace p must be in [0, 1]");
    const DensityOperator target =
        resolve_state(get_field(spec, "target", where), party_profile, where + " target");
    const KrausChannel replace = replacement_channel(target);
    std::vector<Matrix> kraus{std::sqrt(1.0 - p) * identity(d)};
    for (const Matrix& k : replace.kraus()) kraus.push_back(std::sqrt(p) * k);
    return KrausChannel(std::move(kraus), party_profile, party_profile);
  }
  fail_parse("unknown noise kind '" + kind + "' in " + where);
}

FreeSetOracle parse_oracle_json(const ordered_json& spec, const std::string& where) {
  const std::string kind = get_string(spec, "kind", where);
  if (kind == "incoherent") return FreeSetOracle::incoherent(get_int(spec, "dim", where));
  if (kind == "twirl_invariant")
    return FreeSetOracle::twirl_invariant(named_group(get_string(spec, "group", where)));
  if (kind == "classical_quantum")
    return FreeSetOracle::classical_quantum(get_int(spec, "x_dim", where),
                                            get_int(spec, "y_dim", where));
  if (kind == "separable_ppt")
    return FreeSetOracle::separable_ppt(parse_dims(get_field(spec, "dims", where), where));
  if (kind == "affine_composite" || kind == "convex_composite") {
    const ordered_json& factors = get_field(spec, "factors", where);
    if (!factors.is_array() || factors.empty())
      fail_parse("'factors' in " + where + " must be a nonempty array");
    std::vector<FreeSetOracle> parsed;
    for (std::size_t i = 0; i < factors.size(); ++i)
      parsed.push_back(
          parse_oracle_json(factors.at(i), where + " factor " + std::to_string(i)));
    return kind == "affine_composite" ? FreeSetOracle::affine_composite(std::move(parsed))
                                      : FreeSetOracle::convex_composite(std::move(parsed));
  }
  fail_parse("unknown oracle kind '" + kind + "' in " + where);
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json membership_to_json(const MembershipVerdict& v) {
  ordered_json out;
  out["verdict"] = to_string(v.verdict);
  out["reason"] = v.reason;
  if (v.hull_coefficients.has_value()) {
    ordered_json t = ordered_json::array();
    for (Eigen::Index i = 0; i < v.hull_coefficients->size(); ++i)
      t.push_back((*v.hull_coefficients)(i));
    out["hull_coefficients"] = std::move(t);
  }
  if (v.pt_min_eigenvalue.has_value()) out["pt_min_eigenvalue"] = *v.pt_min_eigenvalue;
  if (v.pt_cut.has_value()) out["pt_cut"] = *v.pt_cut;
  if (v.residual.has_value()) out["residual"] = *v.residual;
  return out;
}

ordered_json transcript_to_json(const Transcript& t) {
  ordered_json out;
  ordered_json stages = ordered_json::array();
  const DensityOperator& input = t.stages.front().second;
  for (const auto& [label, state] : t.stages) {
    ordered_json stage;
    stage["label"] = label;
    stage["trace_distance_to_input"] = trace_distance(input, state);
    stages.push_back(std::move(stage));
  }
  out["stages"] = std::move(stages);
  out["transmitted_unaltered"] = t.transmitted_unaltered;
  out["final_state"] = matrix_to_json(t.final_state().matrix());
  out["output_membership"] = membership_to_json(t.output_membership);
  return out;
}

ordered_json breakability_to_json(const BreakabilityVerdict& v) {
  ordered_json out;
  out["status"] = to_string(v.status);
  out["fixed_subspace_dimension"] = v.fixed_subspace.dimension;
  out["argument"] = v.argument;
  if (v.witness.has_value()) {
    out["witness"] = matrix_to_json(v.witness->matrix());
    out["witness_fixed_distance"] = v.witness_fixed_distance;
  }
  if (v.witness_membership.has_value())
    out["witness_membership"] = membership_to_json(*v.witness_membership);
  out["samples_tried"] = v.samples_tried;
  out["samples_valid"] = v.samples_valid;
  return out;
}

ordered_json eb_to_json(const EbReport& r) {
  ordered_json out;
  out["applicable"] = r.applicable;
  ordered_json verdicts = ordered_json::array();
  for (EbVerdict v : r.party_verdicts) verdicts.push_back(to_string(v));
  out["party_verdicts"] = std::move(verdicts);
  out["all_entanglement_breaking"] = r.all_entanglement_breaking;
  if (r.asserted.has_value()) out["asserted"] = to_string(*r.asserted);
  out["analysis_status"] = to_string(r.analysis_status);
  out["consistent"] = r.consistent;
  out["note"] = r.note;
  return out;
}

ordered_json commutation_to_json(const CommutationReport& r) {
  ordered_json out;
  out["pass"] = r.pass;
  out["checked"] = r.checked;
  out["max_distance"] = r.max_distance;
  if (r.witness.has_value()) {
    out["witness"] = matrix_to_json(*r.witness);
    out["censor_after_noise"] = matrix_to_json(*r.censor_after_noise);
    out["noise_after_censor"] = matrix_to_json(*r.noise_after_censor);
  }
  return out;
}

ordered_json nongenerating_to_json(const NonGeneratingReport& r) {
  ordered_json out;
  out["pass"] = r.pass;
  out["checked"] = r.checked;
  out["member"] = r.member;
  out["nonmember"] = r.nonmember;
  out["inconclusive"] = r.inconclusive;
  if (r.witness.has_value()) {
    out["witness"] = matrix_to_json(*r.witness);
    out["witness_reason"] = r.witness_reason;
  }
  return out;
}

std::string digest_string(std::uint64_t digest) {
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << digest;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    hash ^= static_cast<std::uint64_t>(b);
    hash *= 1099511628211ull;
  }
  return hash;
}

LoadedScenario load_scenario(const std::string& json_text,
                             std::optional<std::uint64_t> seed_override,
                             std::optional<int> budget_override) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < json_text.size(); ++i)
      if (json_text[i] == '\n') ++line;
    fail_parse("invalid JSON at line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) fail_parse("scenario file must be a JSON object");
  if (get_int(doc, "version", "scenario") != kScenarioFileVersion)
    fail_parse("unsupported scenario file version (expected " +
               std::to_string(kScenarioFileVersion) + ")");

  std::uint64_t seed = doc.value("seed", 0ull);
  if (seed_override.has_value()) seed = *seed_override;
  int budget = doc.value("budget", 256);
  if (budget_override.has_value()) budget = *budget_override;

  const ordered_json& parties_json = get_field(doc, "parties", "scenario");
  if (!parties_json.is_array() || parties_json.empty())
    fail_parse("'parties' must be a nonempty array");

  std::vector<Party> parties;
  for (std::size_t i = 0; i < parties_json.size(); ++i) {
    const ordered_json& pj = parties_json.at(i);
    const std::string where = "party " + std::to_string(i);
    const std::string label =
        pj.contains("label") ? get_string(pj, "label", where) : "A" + std::to_string(i + 1);
    CensorSpec censor = parse_censor_json(get_field(pj, "censor", where), where + " censor");
    const DimProfile profile = censor.profile();
    std::optional<KrausChannel> noise;
    if (pj.contains("noise"))
      noise = parse_noise_json(pj.at("noise"), profile, where + " noise");

    if (pj.contains("free")) {
      FreeSetOracle free_oracle = parse_oracle_json(pj.at("free"), where + " free oracle");
      GeneratorSet authorized = authorized_generators(censor);
      parties.emplace_back(label, std::move(censor), std::move(noise), std::move(authorized),
                           std::move(free_oracle));
    } else {
      parties.push_back(Party::standard(label, std::move(censor), std::move(noise)));
    }
  }

  DimProfile joint = parties.front().local_profile();
  for (std::size_t i = 1; i < parties.size(); ++i)
    joint = DimProfile::concat(joint, parties[i].local_profile());

  DensityOperator input =
      resolve_state(get_field(doc, "input_state", "scenario"), joint, "input_state");

  const ordered_json& oracles = get_field(doc, "oracles", "scenario");
  FreeSetOracle composite =
      parse_oracle_json(get_field(oracles, "composite", "oracles"), "composite oracle");

  LoadedScenario loaded{
      Scenario(std::move(parties), std::move(input), std::move(composite), seed, budget),
      doc.dump(), 0};
  loaded.digest = fnv1a64(loaded.canonical_json);
  return loaded;
}

std::string run_report(const LoadedScenario& loaded) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario& s = loaded.scenario;

  ordered_json report;
  report["tool_version"] = kToolVersion;
  report["scenario_file_version"] = kScenarioFileVersion;
  report["scenario_digest"] = digest_string(loaded.digest);
  report["seed"] = s.seed;
  report["budget"] = s.budget;

  ordered_json parties = ordered_json::array();
  for (const Party& p : s.parties) {
    ordered_json pj;
    pj["label"] = p.label();
    pj["censor"] = p.censor_spec().describe();
    pj["noise"] = p.noise().has_value() ? "present" : "none";
    pj["free_oracle"] = p.free_oracle().describe();
    parties.push_back(std::move(pj));
  }
  report["parties"] = std::move(parties);
  report["composite_oracle"] = s.composite_free_oracle.describe();

  const Transcript transcript = run_scenario(s);
  report["transcript"] = transcript_to_json(transcript);

  const BreakabilityVerdict verdict = breakability_analysis(s);
  report["breakability"] = breakability_to_json(verdict);

  const EbReport eb = eb_unbreakability_check(s);
  report["eb_check"] = eb_to_json(eb);

  if (s.noisy) {
    ordered_json checks = ordered_json::array();
    const DimProfile joint = s.joint_profile();
    int base = 0;
    for (std::size_t i = 0; i < s.parties.size(); ++i) {
      const Party& p = s.parties[i];
      const int count = p.local_profile().count();
      if (p.noise().has_value()) {
        ordered_json cj;
        cj["party"] = p.label();
        cj["nongenerating"] = nongenerating_to_json(nongenerating_check(
            *p.noise(), p.free_oracle(), canonical_free_generators(p.free_oracle()), 100));
        cj["commutation"] = commutation_to_json(
            commutation_check(*p.noise(), p.censor(), p.authorized_subspace(), 100));

        std::vector<int> keep;
        for (int k = 0; k < count; ++k) keep.push_back(base + k);
        Matrix margin = partial_trace(s.input_state.matrix(), joint, keep);
        DensityOperator margin_state(hermitian_part(margin), p.local_profile(), 1e-8);
        if (is_fixed_point(p.censor(), margin_state, 1e-8)) {
          const CorrectionReport probe =
              correction_effect_probe(*p.noise(), p.censor(), margin_state);
          ordered_json pj;
          pj["noisy_distance"] = probe.noisy_distance;
          pj["censored_distance"] = probe.censored_distance;
          pj["censor_corrects"] = probe.censor_corrects;
          cj["correction"] = std::move(pj);
        } else {
          cj["correction_skipped"] = "input marginal is not authorized for this party";
        }
        checks.push_back(std::move(cj));
      }
      base += count;
    }
    report["noise_checks"] = std::move(checks);
  }

  const auto stop = std::chrono::steady_clock::now();
  report["timing_ms"] =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start).count();
  return report.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Verify
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

std::vector<int> parse_dim_list(const std::string& token, const std::string& where) {
  std::vector<int> dims;
  for (const std::string& part : split(token, 'x')) {
    try {
      dims.push_back(std::stoi(part));
    } catch (const std::exception&) {
      fail_parse("bad dimension list '" + token + "' in " + where);
    }
  }
  return dims;
}

}  // namespace

CensorSpec parse_censor_token(const std::string& token) {
  const std::vector<std::string> parts = split(token, ':');
  const std::string& kind = parts.front();
  if (kind == "dephasing" && parts.size() == 2)
    return CensorSpec{CensorSpec::Dephasing{std::stoi(parts[1])}};
  if (kind == "twirl" && parts.size() == 2)
    return CensorSpec{CensorSpec::Twirl{named_group(parts[1])}};
  if (kind == "cq" && parts.size() == 2) {
    const std::vector<int> dims = parse_dim_list(parts[1], "censor token");
    if (dims.size() != 2) fail_parse("cq censor needs dims like 2x2, got '" + token + "'");
    return CensorSpec{CensorSpec::CqCensor{dims[0], dims[1]}};
  }
  if (kind == "replacement" && parts.size() >= 2) {
    if (parts[1] == "max_mixed" && parts.size() == 3) {
      const int d = std::stoi(parts[2]);
      return CensorSpec{CensorSpec::Replacement{
          DensityOperator(identity(d) / static_cast<double>(d), DimProfile({d}))}};
    }
    if (parts[1] == "diag" && parts.size() == 3) {
      const std::vector<std::string> ps = split(parts[2], ',');
      Matrix m = Matrix::Zero(static_cast<int>(ps.size()), static_cast<int>(ps.size()));
      for (std::size_t i = 0; i < ps.size(); ++i)
        m(static_cast<int>(i), static_cast<int>(i)) = Complex(std::stod(ps[i]), 0.0);
      return CensorSpec{CensorSpec::Replacement{
          DensityOperator(m, DimProfile({static_cast<int>(ps.size())}))}};
    }
  }
  fail_parse("unknown censor token '" + token + "'");
}

FreeSetOracle parse_oracle_token(const std::string& token) {
  const std::vector<std::string> parts = split(token, ':');
  const std::string& kind = parts.front();
  if (kind == "incoherent" && parts.size() == 2)
    return FreeSetOracle::incoherent(std::stoi(parts[1]));
  if (kind == "twirl_invariant" && parts.size() == 2)
    return FreeSetOracle::twirl_invariant(named_group(parts[1]));
  if (kind == "classical_quantum" && parts.size() == 2) {
    const std::vector<int> dims = parse_dim_list(parts[1], "oracle token");
    if (dims.size() != 2) fail_parse("classical_quantum oracle needs dims like 2x2");
    return FreeSetOracle::classical_quantum(dims[0], dims[1]);
  }
  if (kind == "separable_ppt" && parts.size() == 2)
    return FreeSetOracle::separable_ppt(DimProfile(parse_dim_list(parts[1], "oracle token")));
  fail_parse("unknown oracle token '" + token + "'");
}

GeneratorSet canonical_free_generators(const FreeSetOracle& oracle) {
  switch (oracle.kind()) {
    case FreeSetOracle::Kind::Incoherent: {
      std::vector<DensityOperator> gens;
      const int d = oracle.profile().total();
      for (int x = 0; x < d; ++x) gens.emplace_back(basis_projector(d, x), DimProfile({d}));
      return GeneratorSet(std::move(gens));
    }
    case FreeSetOracle::Kind::TwirlInvariant:
      return authorized_generators(CensorSpec{CensorSpec::Twirl{oracle.group()}});
    case FreeSetOracle::Kind::ClassicalQuantum:
      return authorized_generators(
          CensorSpec{CensorSpec::CqCensor{oracle.x_dim(), oracle.y_dim()}});
    case FreeSetOracle::Kind::SeparablePPT: {
      // Products of per-factor density bases: convex combinations cover a
      // spanning family of separable states.
      const DimProfile& profile = oracle.profile();
      std::vector<Matrix> products{Matrix::Ones(1, 1)};
      for (int f = 0; f < profile.count(); ++f) {
        std::vector<Matrix> next;
        for (const Matrix& head : products)
          for (const DensityOperator& b : density_basis(profile.dim(f)))
            next.push_back(kron(head, b.matrix()));
        products = std::move(next);
      }
      std::vector<DensityOperator> gens;
      for (Matrix& m : products) gens.emplace_back(std::move(m), profile);
      return GeneratorSet(std::move(gens));
    }
    case FreeSetOracle::Kind::AffineComposite:
    case FreeSetOracle::Kind::ConvexComposite: {
      std::vector<std::vector<DensityOperator>> factor_gens;
      for (const FreeSetOracle& f : oracle.factors())
        factor_gens.push_back(canonical_free_generators(f).states());
      std::vector<Matrix> products{Matrix::Ones(1, 1)};
      for (const std::vector<DensityOperator>& gens : factor_gens) {
        std::vector<Matrix> next;
        for (const Matrix& head : products)
          for (const DensityOperator& g : gens) next.push_back(kron(head, g.matrix()));
        products = std::move(next);
      }
      std::vector<DensityOperator> gens;
      for (Matrix& m : products) gens.emplace_back(std::move(m), oracle.profile());
      return GeneratorSet(std::move(gens));
    }
  }
  throw std::invalid_argument("canonical_free_generators: unknown oracle kind");
}

std::string verify_report(const std::string& censor_token,
                          const std::optional<std::string>& free_token, int samples,
                          std::uint64_t seed) {
  const CensorSpec spec = parse_censor_token(censor_token);
  const KrausChannel channel = censor_channel(spec);

  FreeSetOracle free_oracle = [&] {
    if (free_token.has_value()) {
      // Bare kind names inherit dimensions from the censor.
      if (*free_token == "incoherent")
        return FreeSetOracle::incoherent(channel.out_dim());
      if (*free_token == "twirl_invariant") {
        if (const auto* t = std::get_if<CensorSpec::Twirl>(&spec.kind))
          return FreeSetOracle::twirl_invariant(t->group);
        fail_parse("--free twirl_invariant needs an explicit group for this censor");
      }
      if (*free_token == "separable_ppt")
        return FreeSetOracle::separable_ppt(spec.profile());
      return parse_oracle_token(*free_token);
    }
    std::optional<FreeSetOracle> natural = natural_free_oracle(spec);
    if (!natural.has_value())
      fail_parse("censor '" + censor_token + "' has no canonical free set; pass --free");
    return *natural;
  }();

  const GeneratorSet authorized = authorized_generators(spec);

  const CptpDiagnostics cptp = is_cptp(channel, 1e-9);
  const bool idempotent = is_idempotent(channel, 1e-9);
  const EbVerdict eb = is_entanglement_breaking(channel);
  const DestroyReport destroy = verify_resource_destroying(channel, free_oracle, samples, seed);
  const PreserveReport preserve = verify_freeness_preserving(channel, authorized, 1e-8);
  const bool overall = cptp.ok() && idempotent && destroy.pass && preserve.pass;

  std::ostringstream out;
  out << "censor: " << spec.describe() << "\n";
  out << "free:   " << free_oracle.describe() << "\n\n";
  out << "check                   result        detail\n";
  out << "cptp                    " << (cptp.ok() ? "pass" : "FAIL") << "          tp_error="
      << cptp.tp_error << " choi_min_eig=" << cptp.choi_min_eigenvalue << "\n";
  out << "idempotent              " << (idempotent ? "pass" : "FAIL") << "\n";
  out << "entanglement_breaking   " << to_string(eb) << "\n";
  out << "resource_destroying     " << (destroy.pass ? "pass" : "FAIL") << "          checked="
      << destroy.checked << " member=" << destroy.member << " nonmember=" << destroy.nonmember
      << " inconclusive=" << destroy.inconclusive << (destroy.pass ? "" : " [" + destroy.witness_reason + "]")
      << "\n";
  out << "freeness_preserving     " << (preserve.pass ? "pass" : "FAIL") << "          checked="
      << preserve.checked << " skipped=" << preserve.skipped
      << " max_distance=" << preserve.max_distance << "\n";
  out << "overall                 " << (overall ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace censorlab

// censorlab: load censorship scenarios, run the protocol and its breakability
// analysis, and verify censor channels against their defining conditions.
//
// Exit codes: 0 completed (verdicts live in the report), 2 parse error,
// 3 validation error, 4 internal error.

#include "censorlab/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInternal = 4;

std::optional<int> budget_from_env() {
  const char* raw = std::getenv("CENSORLAB_BUDGET");
  if (raw == nullptr) return std::nullopt;
  try {
    return std::stoi(raw);
  } catch (const std::exception&) {
    throw censorlab::ParseError("CENSORLAB_BUDGET is not an integer: " + std::string(raw));
  }
}

std::string read_scenario_text(const std::string& path_or_preset) {
  namespace fs = std::filesystem;
  if (fs::exists(fs::path(path_or_preset))) {
    std::ifstream in(path_or_preset, std::ios::binary);
    if (!in) throw censorlab::ParseError("cannot read scenario file: " + path_or_preset);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  if (auto preset = censorlab::find_preset(path_or_preset); preset.has_value())
    return preset->json_text;
  throw censorlab::ParseError("no such file or preset: " + path_or_preset);
}

int run_command(const std::string& target, std::optional<std::uint64_t> seed) {
  const std::string text = read_scenario_text(target);
  const censorlab::LoadedScenario loaded =
      censorlab::load_scenario(text, seed, budget_from_env());
  std::cout << censorlab::run_report(loaded);
  return kExitOk;
}

int verify_command(const std::string& censor, const std::optional<std::string>& free_token,
                   int samples, std::uint64_t seed) {
  std::cout << censorlab::verify_report(censor, free_token, samples, seed);
  return kExitOk;
}

int presets_command() {
  for (const censorlab::Preset& p : censorlab::presets())
    std::cout << p.name << "\t" << p.description << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum censorship protocol simulator"};
  app.require_subcommand(1);

  std::string run_target;
  std::optional<std::uint64_t> seed;
  CLI::App* run = app.add_subcommand("run", "run a scenario file or named preset");
  run->add_option("scenario", run_target, "scenario file path or preset name")->required();
  run->add_option("--seed", seed, "override the scenario seed");

  std::string censor_token;
  std::optional<std::string> free_token;
  int samples = 500;
  std::uint64_t verify_seed = 1234;
  CLI::App* verify = app.add_subcommand("verify", "verify a censor channel's properties");
  verify->add_option("--censor", censor_token, "censor spec, e.g. dephasing:2, twirl:pauli1, cq:2x2")
      ->required();
  verify->add_option("--free", free_token, "free-set spec, e.g. incoherent, separable_ppt:2x2");
  verify->add_option("--samples", samples, "random states for the resource-destroying check");
  verify->add_option("--seed", verify_seed, "seed for sampled checks");

  CLI::App* presets = app.add_subcommand("presets", "list packaged scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (run->parsed()) return run_command(run_target, seed);
    if (verify->parsed()) return verify_command(censor_token, free_token, samples, verify_seed);
    if (presets->parsed()) return presets_command();
    return kExitParse;
  } catch (const censorlab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

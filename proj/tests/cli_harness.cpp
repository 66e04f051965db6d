// End-to-end checks of the censorlab CLI: exit codes, preset listing,
// seed/budget overrides, and report determinism. argv[1] is the binary path.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int g_failures = 0;
std::string g_cli;

void run_test(const std::string& name, const std::function<void()>& body) {
  try {
    body();
    std::cout << "[PASS] " << name << "\n";
  } catch (const std::exception& e) {
    ++g_failures;
    std::cout << "[FAIL] " << name << ": " << e.what() << "\n";
  }
}

void require(bool cond, const std::string& message) {
  if (!cond) throw std::runtime_error(message);
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string command = env_prefix + g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("cannot spawn: " + command);
  CliResult result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string without_timing_line(const std::string& report) {
  std::istringstream in(report);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"timing_ms\"") == std::string::npos) out << line << "\n";
  return out.str();
}

std::string json_field(const std::string& report, const std::string& key) {
  const std::string needle = "\"" + key + "\": ";
  const std::size_t pos = report.find(needle);
  require(pos != std::string::npos, "field " + key + " not found");
  const std::size_t end = report.find_first_of(",\n", pos);
  return report.substr(pos + needle.size(), end - pos - needle.size());
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const std::filesystem::path path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_harness <path-to-censorlab-cli>\n";
    return 2;
  }
  g_cli = argv[1];

  run_test("presets: exit 0, stable order, documented names", [] {
    const CliResult a = run_cli("presets");
    const CliResult b = run_cli("presets");
    require(a.exit_code == 0, "exit code " + std::to_string(a.exit_code));
    require(a.output == b.output, "listing not stable");
    require(a.output.find("coherence_censorship") != std::string::npos, "missing preset");
    require(a.output.find("entanglement_break") != std::string::npos, "missing preset");
    require(a.output.find("reference_frame_twirl") != std::string::npos, "missing preset");
    std::vector<std::string> names;
    std::istringstream in(a.output);
    std::string line;
    while (std::getline(in, line)) names.push_back(line.substr(0, line.find('\t')));
    for (std::size_t i = 1; i < names.size(); ++i)
      require(names[i - 1] < names[i], "names not sorted");
  });

  run_test("run preset: exit 0 and a structured report", [] {
    const CliResult r = run_cli("run coherence_censorship");
    require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
    require(r.output.find("\"breakability\"") != std::string::npos, "no breakability section");
    require(r.output.find("UnbreakableProved") != std::string::npos, "wrong verdict");
  });

  run_test("run: verdicts are results, not exit codes", [] {
    const CliResult r = run_cli("run entanglement_break");
    require(r.exit_code == 0, "broken censorship must still exit 0");
    require(r.output.find("BrokenWitness") != std::string::npos, "missing verdict");
  });

  run_test("run nonexistent target: exit 2", [] {
    require(run_cli("run no_such_preset_or_file").exit_code == 2, "wrong exit code");
  });

  run_test("run malformed JSON file: exit 2", [] {
    const auto path = temp_file("censorlab_bad.json", "{ not json");
    require(run_cli("run " + path.string()).exit_code == 2, "wrong exit code");
  });

  run_test("run non-density input: exit 3", [] {
    const auto path = temp_file("censorlab_invalid.json", R"({
      "version": 1,
      "parties": [{"censor": {"kind": "dephasing", "dim": 2}}],
      "input_state": {"matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]},
      "oracles": {"composite": {"kind": "incoherent", "dim": 2}}
    })");
    require(run_cli("run " + path.string()).exit_code == 3, "wrong exit code");
  });

  run_test("run dimension-cap violation: exit 3", [] {
    std::ostringstream doc;
    doc << R"({"version": 1, "parties": [)";
    for (int i = 0; i < 7; ++i)
      doc << (i ? "," : "") << R"({"censor": {"kind": "dephasing", "dim": 2}})";
    doc << R"(], "input_state": {"preset": "max_mixed"},
           "oracles": {"composite": {"kind": "incoherent", "dim": 64}}})";
    const auto path = temp_file("censorlab_cap.json", doc.str());
    require(run_cli("run " + path.string()).exit_code == 3, "wrong exit code");
  });

  run_test("--seed overrides the file seed", [] {
    const CliResult base = run_cli("run swap_noise");
    const CliResult overridden = run_cli("run swap_noise --seed 4242");
    require(json_field(base.output, "seed") == "19", "base seed wrong");
    require(json_field(overridden.output, "seed") == "4242", "override ignored");
  });

  run_test("CENSORLAB_BUDGET overrides the sampling budget", [] {
    const CliResult r = run_cli("run coherence_censorship", "CENSORLAB_BUDGET=33 ");
    require(json_field(r.output, "budget") == "33", "env override ignored");
    const CliResult bad = run_cli("run coherence_censorship", "CENSORLAB_BUDGET=abc ");
    require(bad.exit_code == 2, "non-integer budget must be a parse error");
  });

  run_test("reports are byte-identical across runs (timing excluded)", [] {
    for (const std::string name :
         {"coherence_censorship", "entanglement_break", "reference_frame_twirl",
          "replacement_minimal", "swap_noise"}) {
      const CliResult a = run_cli("run " + name);
      const CliResult b = run_cli("run " + name);
      require(a.exit_code == 0 && b.exit_code == 0, name + ": nonzero exit");
      require(without_timing_line(a.output) == without_timing_line(b.output),
              name + ": reports differ");
    }
  });

  run_test("verify: table output and exit 0", [] {
    const CliResult r = run_cli("verify --censor dephasing:2 --free incoherent");
    require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
    require(r.output.find("entanglement_breaking   Yes") != std::string::npos, "EB row wrong");
    require(r.output.find("overall                 pass") != std::string::npos, "not all pass");
  });

  run_test("verify: cq censor against the separability oracle", [] {
    const CliResult r = run_cli("verify --censor cq:2x2 --free separable_ppt:2x2 --samples 100");
    require(r.exit_code == 0, "exit code " + std::to_string(r.exit_code));
    require(r.output.find("entanglement_breaking   No") != std::string::npos, "EB row wrong");
    require(r.output.find("overall                 pass") != std::string::npos, "not all pass");
  });

  run_test("verify: bad censor token exits 2", [] {
    require(run_cli("verify --censor warp:9").exit_code == 2, "wrong exit code");
  });

  if (g_failures > 0) {
    std::cout << g_failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "all CLI checks passed\n";
  return 0;
}

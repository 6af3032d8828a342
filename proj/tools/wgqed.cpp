#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wgqed/runner.hpp"
#include "wgqed_presets.hpp"

namespace {

struct Flags {
  std::string config;
  std::string preset;
  std::string manifolds;
  std::string model;
  std::string out;
  std::optional<int> sites;
  std::optional<double> power_khz;
  std::optional<unsigned> threads;
  std::vector<std::string> set;
  bool print_config = false;
};

wgqed::Json preset_document(const std::string& name) {
  for (const auto& [key, text] : wgqed::presets::table)
    if (key == name) return wgqed::parse_json_text(std::string(text), "preset " + name);
  std::string known;
  for (const auto& [key, text] : wgqed::presets::table) known += (known.empty() ? "" : ", ") + std::string(key);
  throw wgqed::ConfigError("unknown preset '" + name + "' (" + known + ")");
}

// preset <- config file <- flags; the subcommand fixes the experiment
wgqed::Json build_document(const std::string& experiment, const Flags& f) {
  wgqed::Json doc = wgqed::Json::object();
  if (!f.preset.empty()) doc.merge_patch(preset_document(f.preset));
  if (!f.config.empty()) doc.merge_patch(wgqed::load_json_file(f.config));
  doc["experiment"] = experiment;
  auto put = [&](const std::string& a) { doc.merge_patch(wgqed::override_patch(a)); };
  if (!f.manifolds.empty()) doc["spectrum"]["manifolds"] = f.manifolds;
  if (!f.model.empty()) doc["system"]["model"] = f.model;
  if (f.sites) doc["system"]["sites"] = *f.sites;
  if (f.power_khz) doc["drive"]["power"] = wgqed::format_number(*f.power_khz) + " kHz";
  if (f.threads) doc["threads"] = *f.threads;
  if (!f.out.empty()) doc["output"] = f.out;
  for (const auto& s : f.set) put(s);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wgqed: collective states of transmon arrays in a waveguide"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string("wgqed ") + wgqed::version);
  bool list = false;
  app.add_flag("--list-presets", list, "print the shipped presets and exit");

  Flags f;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"spectrum", "eigenvalues, decay rates and labels of the effective Hamiltonian"},
      {"burst", "decay of an initially excited array: <N>(t) and emitted intensity"},
      {"transmission", "weak-drive |t|^2 over a (Delta, omega_d) grid"},
      {"power-spectrum", "|S(omega)| of the emitted field for each pair detuning"},
      {"pulsed-spec", "ground population after a Rabi pulse and a phased probe pulse"},
      {"steady-state", "driven steady state at one drive frequency"},
  };
  std::vector<CLI::App*> commands;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("-c,--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    sc->add_option("-p,--preset", f.preset, "start from a shipped preset (see --list-presets)");
    sc->add_option("--model", f.model, "site model: qubit | transmon | harmonic");
    sc->add_option("--sites", f.sites, "number of sites (array layout, burst)");
    sc->add_option("-j,--threads", f.threads, "worker threads, default all cores");
    sc->add_option("-o,--out", f.out, "output directory");
    sc->add_option("--set", f.set, "override a config field, e.g. system.gamma=\"30 MHz\"")->take_all();
    sc->add_flag("--print-config", f.print_config, "print the resolved config and exit");
    std::string n = s.name;
    if (n == "spectrum") sc->add_option("--manifolds", f.manifolds, "excitation manifolds, e.g. 0..2");
    if (n == "transmission" || n == "power-spectrum" || n == "pulsed-spec" || n == "steady-state")
      sc->add_option("--power-khz", f.power_khz, "drive power P/2pi in kHz");
    commands.push_back(sc);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (list) {
    for (const auto& [key, text] : wgqed::presets::table) std::cout << key << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  std::string experiment;
  for (auto* sc : commands)
    if (sc->parsed()) experiment = sc->get_name();

  try {
    auto cfg = wgqed::parse_run_config(build_document(experiment, f));
    if (f.print_config) {
      std::cout << wgqed::to_json(cfg).dump(2) << '\n';
      return 0;
    }
    auto r = wgqed::run(cfg, std::cerr);
    std::cout << r.artifact.csv.string() << '\n' << r.artifact.metadata.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    int rc = wgqed::exit_status(e);
    std::cerr << (rc == 3 ? "solver error: " : "error: ") << e.what() << '\n';
    return rc;
  }
}

// harnack_lab: command-line driver for the verification lab.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harnack/reports.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> model, output_dir, chart;
  std::optional<int> n, grid_size, triples, probes;
  std::optional<double> C, r_min, r_max, tol, D, h;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> lambdas;
  bool exploratory = false;
};

void add_run_options(CLI::App& app, Overrides& o) {
  app.set_help_flag("--help", "print this help and exit");
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--model", o.model, "model id (see `models list`)");
  app.add_option("--n", o.n, "dimension");
  app.add_option("--C", o.C, "Harnack constant");
  app.add_option("--r-min", o.r_min, "inner grid radius");
  app.add_option("--r-max", o.r_max, "outer grid radius");
  app.add_option("--grid-size", o.grid_size, "number of log-spaced grid points");
  app.add_option("--tol", o.tol, "inequality tolerance");
  app.add_option("--D", o.D, "uniform bound for the Lambda consistency check");
  app.add_option("--lambdas", o.lambdas, "interpolation parameters for `corollary`");
  app.add_option("--triples", o.triples, "number of sampled point pairs for `corollary`");
  app.add_option("--probes", o.probes, "radii for hypothesis probes and `audit`");
  app.add_option("--chart", o.chart, "coordinate chart for `oracle commutators`");
  app.add_option("--h", o.h, "finite-difference step");
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--output-dir", o.output_dir, "directory for report and CSV files");
  app.add_flag("--exploratory", o.exploratory, "allow C < 10");
}

harnack::RunConfig resolve(const Overrides& o) {
  harnack::RunConfig c;
  if (!o.config_path.empty()) c = harnack::load_config(o.config_path);
  if (o.model) c.model = *o.model;
  if (o.n) c.n = *o.n;
  if (o.C) c.C = *o.C;
  if (o.r_min) c.r_min = *o.r_min;
  if (o.r_max) c.r_max = *o.r_max;
  if (o.grid_size) c.grid_size = *o.grid_size;
  if (o.tol) c.tol = *o.tol;
  if (o.D) c.D = *o.D;
  if (o.lambdas) c.lambdas = *o.lambdas;
  if (o.triples) c.triples = *o.triples;
  if (o.probes) c.probes = *o.probes;
  if (o.chart) c.chart = *o.chart;
  if (o.h) c.h = *o.h;
  if (o.seed) c.seed = *o.seed;
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.exploratory) c.exploratory = true;
  return c;
}

std::string file_stem(const std::string& command) {
  std::string s = command;
  for (char& ch : s)
    if (ch == ' ') ch = '-';
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw harnack::InvalidInput("cannot write " + p.string());
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harnack inequality verification lab"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Overrides o;
  std::string identity;
  std::vector<std::pair<CLI::App*, std::string>> commands;
  const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, const std::string& full) {
    auto* s = parent->add_subcommand(name, desc);
    add_run_options(*s, o);
    commands.emplace_back(s, full);
    return s;
  };
  leaf(&app, "verify", "check Hess b^2 <= C g on a model", "verify");
  leaf(&app, "min-c", "smallest C with Hess b^2 <= C g on the range", "min-c");
  leaf(&app, "corollary", "convexity check along sampled minimal geodesics", "corollary");
  leaf(&app, "audit", "signed term groups of the maximum principle argument", "audit");
  leaf(&app, "export-profile", "write the radial Green profile as CSV", "export-profile");
  auto* sym = app.add_subcommand("symbolic", "symbolic identity engine")->require_subcommand(1);
  sym->set_help_flag("--help");
  leaf(sym, "verify-all", "reduce every catalogued identity", "symbolic verify-all");
  leaf(sym, "verify", "reduce one identity", "symbolic verify")->add_option("name", identity, "identity name")->required();
  auto* orc = app.add_subcommand("oracle", "finite-difference oracle")->require_subcommand(1);
  orc->set_help_flag("--help");
  leaf(orc, "commutators", "commutator identity residuals on a chart", "oracle commutators");
  auto* mod = app.add_subcommand("models", "model presets")->require_subcommand(1);
  mod->set_help_flag("--help");
  leaf(mod, "list", "list model and chart identifiers", "models list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return harnack::exit_invalid;
  }

  std::string command;
  for (const auto& [s, full] : commands)
    if (s->parsed()) command = full;

  try {
    const auto cfg = resolve(o);
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = harnack::run_command(command, cfg, identity);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string body = harnack::dump_report(out.report);
    std::cout << body;
    if (!cfg.output_dir.empty()) {
      const std::filesystem::path dir(cfg.output_dir);
      std::filesystem::create_directories(dir);
      write_file(dir / (file_stem(command) + ".json"), body);
      for (const auto& [name, content] : out.artifacts) write_file(dir / name, content);
      write_file(dir / (file_stem(command) + ".timing.json"),
                 harnack::json{{"command", command}, {"seconds", seconds}}.dump(2) + "\n");
    }
    std::cerr << command << ": " << harnack::detail::verdict(out.exit_code) << " (" << seconds << " s)\n";
    return out.exit_code;
  } catch (const harnack::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return harnack::exit_invalid;
  } catch (const harnack::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return harnack::exit_fail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return harnack::exit_invalid;
  }
}

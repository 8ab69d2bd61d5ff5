#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "bhlab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bhlab: increasing-stability laboratory for the linearised biharmonic inverse problem"};
  app.require_subcommand(1);

  bhlab::RunOptions options;
  std::string config_path, out_dir, fit_from;
  std::uint64_t seed = 0;
  int threads = 0;

  const std::map<std::string, std::string> about = {
      {"probe", "build the probe pair and check its algebraic identities"},
      {"forward", "solve the forward problem for the configured probe"},
      {"extract", "extract Fourier samples of q from boundary data"},
      {"reconstruct", "extract samples and invert them to q_rec"},
      {"sweep", "reconstruction error against k"},
      {"attsweep", "reconstruction error against attenuation b"},
      {"linerr", "linearization remainder against amplitude"},
      {"bound", "theoretical stability bound over k"},
  };
  for (const auto& name : bhlab::command_names()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "JSON config file (defaults apply when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output root; a run directory is created inside it");
    sub->add_option("--seed", seed, "base seed for noise");
    sub->add_option("--threads", threads, "OpenMP threads (0 = auto)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--include-high-band", options.include_high_band, "use high-band samples in the inversion");
    sub->add_flag("--wall-time", options.wall_time, "record wall-clock seconds in sweep CSVs");
    if (name == "bound") sub->add_option("--fit-from", fit_from, "sweep.csv to fit the bound constant against");
  }

  std::vector<std::string> csvs;
  std::string plot_out = ".";
  auto* plot = app.add_subcommand("plot", "render SVG plots from lab CSV files");
  plot->add_option("csv", csvs, "CSV files")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "directory for the SVG files");

  CLI11_PARSE(app, argc, argv);

  if (plot->parsed()) {
    std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
    return bhlab::plot_command(paths, plot_out, std::cout, std::cerr);
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--config")) options.config_path = config_path;
  if (sub->count("--out")) options.out_dir = out_dir;
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--threads")) options.threads = threads;
  if (sub->get_name() == "bound" && sub->count("--fit-from")) options.fit_from = fit_from;
  return bhlab::run_command(sub->get_name(), options, std::cout, std::cerr);
}

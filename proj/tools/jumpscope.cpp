#include <jumpscope/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

using jumpscope::cli::Mode;
using jumpscope::cli::RunConfig;

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  static const std::map<std::string, Mode> modes{{"auto", Mode::Auto},
                                                 {"smooth", Mode::Smooth},
                                                 {"fractional", Mode::Fractional},
                                                 {"linear", Mode::Linear}};
  cmd->add_option("--mode", cfg.mode, "auto | smooth | fractional | linear")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  cmd->add_option("--delta", cfg.delta, "sup-norm noise bound");
  cmd->add_option("--m1", cfg.m1, "bound on |f'| away from discontinuities");
  cmd->add_option("--m2", cfg.m2, "bound on |f''| away from discontinuities (0 selects linear)");
  cmd->add_option("--alpha", cfg.alpha, "fractional smoothness order in (1, 2]");
  cmd->add_option("--ma", cfg.ma, "bound on the fractional-order norm");
  cmd->add_option("--t", cfg.t, "slope confidence for the linear mode")->capture_default_str();
  cmd->add_option("--kappa", cfg.kappa, "jump factor over the smooth ceiling")->capture_default_str();
  cmd->add_option("--output", cfg.output, "report path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jumpscope: stable differentiation and discontinuity detection for noisy data on [0,1]"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* detect = app.add_subcommand("detect", "analyse sampled data from a CSV file");
  add_model_flags(detect, cfg);
  detect->add_option("--input", cfg.input, "CSV with x,value rows on a uniform grid of [0,1]")->required();
  detect->add_flag("--plot", cfg.emit_plot, "also write <output>.plot.tsv");

  auto* demo = app.add_subcommand("demo", "run detection on synthesized signals and score them");
  add_model_flags(demo, cfg);
  demo->add_option("--input", cfg.input, "signal spec or corpus JSON")->required();
  demo->add_flag("--plot", cfg.emit_plot, "also write <output>.plot.tsv (single signal)");
  demo->add_option("--noise", cfg.noise, "none | uniform | checker | adversarial")->capture_default_str();
  demo->add_option("--seed", cfg.seed, "noise seed (JUMPSCOPE_SEED overrides)")->capture_default_str();
  demo->add_option("--m2-floor", cfg.m2_floor, "lower bound on M2 when taken from ground truth")
      ->capture_default_str();

  auto* gen = app.add_subcommand("gen", "write a random corpus of signal specs");
  gen->add_option("--family", cfg.family, "corpus | kinks")->capture_default_str();
  gen->add_option("--n", cfg.count, "signals (per family for 'kinks')")->capture_default_str();
  gen->add_option("--seed", cfg.seed)->capture_default_str();
  gen->add_option("--delta", cfg.delta, "noise level the corpus floors are tuned for");
  gen->add_option("--m1", cfg.m1_cap, "cap on |f'|")->capture_default_str();
  gen->add_option("--m2", cfg.m2_cap, "cap on |f''|")->capture_default_str();
  gen->add_option("--m2-floor", cfg.m2_floor, "smallest M2 the detector will use")->capture_default_str();
  gen->add_option("--kappa", cfg.kappa)->capture_default_str();
  gen->add_option("--output", cfg.output, "corpus path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return jumpscope::cli::kExitInput;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return jumpscope::cli::run(cfg, std::cerr);
}

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cohere/cli.hpp"

namespace {

void add_functional_options(CLI::App* cmd, cohere::cli::FunctionalArgs& f) {
  cmd->add_option("--f", f.name, "Functional: shannon, l1, alpha, kyfan")
      ->check(CLI::IsMember({"shannon", "l1", "alpha", "kyfan"}));
  cmd->add_option("--alpha", f.alpha, "Order of the alpha entropy, 0 < alpha < 1");
  cmd->add_option("--l", f.l, "Tail start of the Ky Fan functional, l >= 2");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = cohere::cli;
  CLI::App app{"Coherence measures and optimal pure-state conversion"};
  app.require_subcommand(1);

  cli::MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Coherence of a pure state");
  m->add_option("state", measure.state_path, "State file (JSON)")->required();
  add_functional_options(m, measure.functional);

  cli::ConvertArgs convert;
  std::string protocol_path;
  auto* c = app.add_subcommand("convert", "Optimal conversion probability and protocol");
  c->add_option("source", convert.source_path, "Source state file")->required();
  c->add_option("target", convert.target_path, "Target state file")->required();
  c->add_option("--protocol", protocol_path, "Write the optimal protocol to this file");
  c->add_option("--copies", convert.source_copies, "Copies of the source state")
      ->check(CLI::PositiveNumber);
  c->add_option("--target-copies", convert.target_copies, "Copies of the target state")
      ->check(CLI::PositiveNumber);
  c->add_option("--max-target-copies", convert.max_target_copies,
                "Print P(source -> target^n) for n = 1..N");

  std::string channel_path;
  auto* v = app.add_subcommand("verify-channel", "Check completeness and incoherence");
  v->add_option("channel", channel_path, "Channel file")->required();

  std::string ladder_src, ladder_dst;
  auto* l = app.add_subcommand("ladder", "Print breakpoints, ratios and the intermediate state");
  l->add_option("source", ladder_src, "Source state file")->required();
  l->add_option("target", ladder_dst, "Target state file")->required();

  cli::RoofArgs roof;
  std::string ensemble_path;
  auto* r = app.add_subcommand("roof", "Upper bound on the convex roof of a density matrix");
  r->add_option("density", roof.density_path, "Density matrix file")->required();
  add_functional_options(r, roof.functional);
  r->add_option("--restarts", roof.restarts, "Optimizer restarts");
  r->add_option("--ensemble-size", roof.ensemble_size, "Ensemble size (default rank^2)");
  r->add_option("--seed", roof.seed, "Random seed");
  r->add_option("--ensemble-out", ensemble_path, "Write the best ensemble to this file");

  cli::DemoArgs demo;
  auto* d = app.add_subcommand("paper-demo", "Run the two-copy example checks");
  d->add_flag("--json", demo.json, "Machine-readable report");
  d->add_option("--tolerance", demo.tolerance, "Comparison tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  if (!protocol_path.empty()) convert.protocol_path = protocol_path;
  if (!ensemble_path.empty()) roof.ensemble_path = ensemble_path;

  if (*m) return cli::cmd_measure(measure, std::cout, std::cerr);
  if (*c) return cli::cmd_convert(convert, std::cout, std::cerr);
  if (*v) return cli::cmd_verify_channel(channel_path, std::cout, std::cerr);
  if (*l) return cli::cmd_ladder(ladder_src, ladder_dst, std::cout, std::cerr);
  if (*r) return cli::cmd_roof(roof, std::cout, std::cerr);
  if (*d) return cli::cmd_paper_demo(demo, std::cout, std::cerr);
  return cli::kUsageError;
}

#include "optcert/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{
      "optcert: certify first- and second-order optimality conditions at "
      "candidate points of piecewise-polynomial programs"};
  app.require_subcommand(1);

  optcert::RunConfig cfg;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
  };

  CLI::App* validate =
      app.add_subcommand("validate", "Check problem structure and smoothness");
  validate->add_option("file", cfg.input_path, "Problem file")->required();
  add_format(validate);

  CLI::App* certify = app.add_subcommand(
      "certify", "Produce optimality certificates at a candidate point");
  certify->add_option("file", cfg.input_path, "Problem file")->required();
  certify->add_option("--point", cfg.point_arg, "Candidate point x1,x2,...")
      ->required();
  certify->add_option("--multipliers", cfg.multipliers_path,
                      "JSON file with candidate multipliers");
  certify->add_option("--samples", cfg.samples, "Sampling directions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  certify->add_option("--seed", cfg.seed, "Random seed")
      ->capture_default_str();
  certify->add_option("--tol-q", cfg.tol_q, "Curvature decision band")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  certify->add_flag("--strict", cfg.strict,
                    "Exit 3 when any certificate is INCONCLUSIVE");
  add_format(certify);

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Brute-force growth and local-minimality estimate");
  oracle->add_option("file", cfg.input_path, "Problem file")->required();
  oracle->add_option("--point", cfg.point_arg, "Candidate point x1,x2,...")
      ->required();
  oracle->add_option("--radius", cfg.radius, "Sampling ball radius")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle->add_option("--samples", cfg.oracle_samples, "Sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle->add_option("--seed", cfg.seed, "Random seed")
      ->capture_default_str();
  add_format(oracle);

  CLI::App* taylor = app.add_subcommand(
      "taylor", "Second-order mean-value bound along a segment");
  taylor->add_option("file", cfg.input_path, "Problem file")->required();
  taylor
      ->add_option("--fn", cfg.fn,
                   "Function selector: f<i>, g<i>, or h<i>")
      ->capture_default_str();
  taylor->add_option("--a", cfg.a_arg, "Segment start a1,a2,...")->required();
  taylor->add_option("--b", cfg.b_arg, "Segment end b1,b2,...")->required();
  add_format(taylor);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (CLI::App* sub : {validate, certify, oracle, taylor})
    if (sub->parsed()) cfg.command = sub->get_name();

  return optcert::run_command(cfg, std::cout, std::cerr);
}

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include <psikit/cli.hpp>
#include <psikit/psikit.hpp>

namespace {

void add_output_options(CLI::App* cmd, psikit::cli::RunConfig& cfg) {
  cmd->add_option("--tol", cfg.tol, "solver tolerance")->capture_default_str();
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized psi-estimators: point estimates, certified pair enclosures, comparisons"};
  app.require_subcommand(1);
  psikit::cli::RunConfig cfg;

  CLI::App* est = app.add_subcommand("estimate", "sign-change estimate of a weighted sample");
  est->add_option("sample", cfg.sample_path, "CSV file, rows observation,weight")->required();
  est->add_option("--family", cfg.family, "family spec, e.g. power:p=3 or lomax:alpha=1.5")
      ->required();
  add_output_options(est, cfg);

  CLI::App* enc = app.add_subcommand("enclose", "certified bounds from pair estimators");
  enc->add_option("sample", cfg.sample_path, "CSV file, weights are replication counts")
      ->required();
  enc->add_option("--family", cfg.family, "family spec")->required();
  enc->add_option("--k-limit", cfg.k_limit, "largest matrix scale to enumerate (default 4)");
  enc->add_option("--budget-secs", cfg.budget_secs, "wall-clock cap for enumeration");
  enc->add_option("--budget-matrices", cfg.budget_matrices, "hard cap on candidate matrices");
  enc->add_option("--workers", cfg.workers, "evaluation threads")->capture_default_str();
  add_output_options(enc, cfg);

  CLI::App* cmp = app.add_subcommand("compare", "worst case of a comparative function");
  cmp->add_option("--psi", cfg.psi, "first family spec");
  cmp->add_option("--phi", cfg.phi, "second family spec");
  cmp->add_option("--comparative", cfg.comparative, "difference or ratio")
      ->capture_default_str();
  cmp->add_option("--grid", cfg.grid, "comma-separated observation grid");
  cmp->add_option("--k-limit", cfg.k_limit, "cap on total replication k+m (default 100)");
  cmp->add_option("--schweitzer", cfg.schweitzer,
                  "emit the sharp arithmetic/harmonic ratio bound for [a, b]")
      ->expected(2);
  add_output_options(cmp, cfg);

  CLI::App* ver = app.add_subcommand("verify", "run the property suites");
  ver->add_option("--seed", cfg.seed, "seed for randomized properties")->capture_default_str();
  ver->add_flag("--inject-fault", cfg.inject_fault,
                "add a family without a sign change to exercise the failure path");
  add_output_options(ver, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // The budget flag distinguishes "absent" from an explicit 0.
  cfg.budget_matrices_set = enc->count("--budget-matrices") > 0;

  try {
    if (est->parsed()) return psikit::cli::cmd_estimate(cfg, std::cout);
    if (enc->parsed()) return psikit::cli::cmd_enclose(cfg, std::cout);
    if (cmp->parsed()) return psikit::cli::cmd_compare(cfg, std::cout);
    if (ver->parsed()) return psikit::cli::cmd_verify(cfg, std::cout);
  } catch (const psikit::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const psikit::BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const psikit::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

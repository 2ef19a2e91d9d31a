// Command-line front end: builds hypercube quotients, runs the verification
// batteries, computes exact distortions and Poincare certificates, and runs
// sketchability simulations. Every run is reproducible from its seed and
// emits a single structured (or tabular) report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "snowcube/report.hpp"
#include "snowcube/runner.hpp"

namespace {

void add_common_flags(CLI::App* sub, snowcube::RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "RNG seed; identical seeds give identical reports");
  sub->add_option("--format", cfg.format, "Report format: structured | tabular")
      ->check(CLI::IsMember({"structured", "tabular"}));
  sub->add_option("--out", cfg.out, "Write the report to this path instead of stdout");
  sub->add_option("--max-k", cfg.caps.max_k, "Dimension cap for dense 2^k arrays");
  sub->add_option("--max-lp-points", cfg.caps.max_lp_points,
                  "Point cap for the exact distortion LP");
  sub->add_option("--max-cut-points", cfg.caps.max_cut_points,
                  "Point cap for Poincare cut enumeration");
  sub->add_option("--max-orbit-subset", cfg.caps.max_orbit_subset,
                  "Orbit cap for exhaustive subset search");
  sub->add_option("--group-order-cap", cfg.caps.group_order_cap,
                  "Maximum enumerated group order");
}

void add_group_flags(CLI::App* sub, snowcube::RunConfig& cfg) {
  sub->add_option("--k", cfg.k, "Cube dimension");
  sub->add_option("--group", cfg.group,
                  "Group acting on coordinates: cyclic | dihedral | symmetric | trivial | file")
      ->check(CLI::IsMember({"cyclic", "dihedral", "symmetric", "trivial", "file"}));
  sub->add_option("--generators-file", cfg.generators_file,
                  "Generator file (one permutation per line) when --group file");
}

int emit(const snowcube::Report& rep) {
  const std::string text = snowcube::render_report(rep);
  if (rep.config.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(rep.config.out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output path " << rep.config.out << "\n";
      return 2;
    }
    out << text;
  }
  return rep.failures() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snowcube: Fourier analysis on hypercube quotients, cut-cone distortion, "
               "Poincare certificates, and distance sketching"};
  app.require_subcommand(1);

  snowcube::RunConfig cfg;

  auto* fourier = app.add_subcommand("fourier", "Transform/convolution/influence checks");
  add_group_flags(fourier, cfg);
  add_common_flags(fourier, cfg);

  auto* quotient = app.add_subcommand("quotient", "Orbits, quotient metric, counting bound");
  add_group_flags(quotient, cfg);
  quotient->add_option("--eta", cfg.eta, "Near-pair threshold as a fraction of k");
  quotient->add_option("--mc-samples", cfg.mc_samples,
                       "Monte Carlo samples when exact enumeration is out of reach");
  quotient->add_option("--p", cfg.p, "Noise level; default derives p from --beta");
  quotient->add_option("--beta", cfg.beta, "Noise exponent parameter");
  add_common_flags(quotient, cfg);

  auto* verify = app.add_subcommand("verify", "Full invariant suite at a given k and group");
  add_group_flags(verify, cfg);
  verify->add_option("--eta", cfg.eta, "Near-pair threshold as a fraction of k");
  verify->add_option("--beta", cfg.beta, "Noise exponent parameter");
  verify->add_option("--p", cfg.p, "Noise level; default derives p from --beta");
  verify->add_option("--kko-c", cfg.kko_c, "Junta-regime constant (> 1 enables the record)");
  verify->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples for large k");
  add_common_flags(verify, cfg);

  auto* distortion = app.add_subcommand(
      "distortion", "Exact L1 distortion of a metric (or quotient) and its snowflakes");
  distortion->add_option("--metric", cfg.metric_file, "Metric matrix file (n, then n rows)");
  add_group_flags(distortion, cfg);
  distortion
      ->add_option("--epsilon", cfg.epsilons,
                   "Snowflake parameters; c1 of d^(1-eps) is computed for each")
      ->expected(-1);
  distortion->add_option("--rational", cfg.rational, "Exact verification: auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  add_common_flags(distortion, cfg);

  auto* certificate = app.add_subcommand(
      "certificate", "Poincare lower bounds on quotient snowflakes, with soundness checks");
  add_group_flags(certificate, cfg);
  certificate
      ->add_option("--epsilon", cfg.epsilons, "Snowflake parameters for the bound")
      ->expected(-1);
  certificate->add_option("--beta", cfg.beta, "Noise exponent parameter");
  certificate->add_option("--p", cfg.p, "Noise level; default derives p from --beta");
  certificate->add_option("--rational", cfg.rational, "Exact verification: auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  add_common_flags(certificate, cfg);

  auto* sketch = app.add_subcommand(
      "sketch", "Sketchability simulation through the negative-type pipeline");
  sketch->add_option("--metric", cfg.metric_file,
                     "Metric matrix file; default is the Hamming cube of dimension k");
  sketch->add_option("--k", cfg.k, "Hamming cube dimension when no metric file is given");
  sketch->add_option("--r", cfg.r, "Scale to test");
  sketch->add_option("--D", cfg.D, "Gap factor");
  sketch->add_option("--s", cfg.sketch_bits, "Sketch bits per label");
  sketch->add_option("--trials", cfg.trials, "Monte Carlo trials (fresh randomness each)");
  add_common_flags(sketch, cfg);
  sketch->parse_complete_callback([&cfg] {
    if (cfg.k == 8 && cfg.metric_file.empty()) cfg.k = 6;  // default cube for sketching
  });

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    return emit(snowcube::run(cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

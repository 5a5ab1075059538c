#include "gyrostab/commands.hpp"
#include "gyrostab/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <vector>

namespace {

using gyrostab::cli::ConfigError;
using gyrostab::cli::RunConfig;

struct FlagValues {
  std::string config_path, out_path, eq_state_csv, sim_state_csv, family, mu_vec, r_g_vec;
  double I1 = 0, I2 = 0, I3 = 0, mu = 0, T = 0, dt = 0, delta0 = 0, threshold = 0;
  double q = 0, alpha = 0, beta = 0, theta = 0, alpha1 = 0, alpha2 = 0, alpha3 = 0;
  double mass = 0;
  int mu_axis = 0, samples = 0;
  std::uint64_t seed = 0;
  bool general = false, corrupt = false;
};

/// The same logical option may be registered on several subcommands; a
/// flag counts as passed when any registration saw it.
class OptionSet {
 public:
  void add(const std::string& name, CLI::Option* option) { options_[name].push_back(option); }
  [[nodiscard]] bool passed(const std::string& name) const {
    const auto it = options_.find(name);
    if (it == options_.end()) return false;
    for (const auto* o : it->second)
      if (o->count() > 0) return true;
    return false;
  }

 private:
  std::map<std::string, std::vector<CLI::Option*>> options_;
};

void add_equilibrium_flags(CLI::App* cmd, FlagValues& v, OptionSet& opt) {
  opt.add("family", cmd->add_option("--family", v.family, "equilibrium family (E0|E12|E3|E4|E5)"));
  opt.add("eq-state", cmd->add_option("--state", v.eq_state_csv, "raw state M1,M2,M3,g1,g2,g3"));
  opt.add("q", cmd->add_option("--q", v.q, "E12 spin rate"));
  opt.add("alpha", cmd->add_option("--alpha", v.alpha, "E12 gamma component"));
  opt.add("beta", cmd->add_option("--beta", v.beta, "relative-family spin parameter"));
  opt.add("theta", cmd->add_option("--theta", v.theta, "gamma colinearity parameter"));
  opt.add("alpha1", cmd->add_option("--alpha1", v.alpha1, "E0 gamma component 1"));
  opt.add("alpha2", cmd->add_option("--alpha2", v.alpha2, "E0 gamma component 2"));
  opt.add("alpha3", cmd->add_option("--alpha3", v.alpha3, "E0 gamma component 3"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability analysis of the balanced heavy gyrostat"};
  app.require_subcommand(1);
  app.fallthrough();

  FlagValues v;
  OptionSet opt;

  opt.add("config", app.add_option("--config", v.config_path, "config file (ini sections)"));
  opt.add("I1", app.add_option("--I1", v.I1, "largest inertia moment"));
  opt.add("I2", app.add_option("--I2", v.I2, "middle inertia moment"));
  opt.add("I3", app.add_option("--I3", v.I3, "smallest inertia moment"));
  opt.add("mu-axis", app.add_option("--mu-axis", v.mu_axis, "inertia axis carrying mu (1..3)"));
  opt.add("mu", app.add_option("--mu", v.mu, "gyrostatic moment along --mu-axis"));
  opt.add("mu-vec", app.add_option("--mu-vec", v.mu_vec, "gyrostatic moment as x,y,z"));
  opt.add("mass", app.add_option("--mass", v.mass, "gyrostat mass (general field only)"));
  opt.add("r-g", app.add_option("--r-g", v.r_g_vec, "center-of-gravity offset as x,y,z"));
  opt.add("out", app.add_option("--out", v.out_path, "output file path"));
  opt.add("seed", app.add_option("--seed", v.seed, "random seed"));

  auto* enumerate = app.add_subcommand("enumerate", "list the equilibrium family templates");
  add_equilibrium_flags(enumerate, v, opt);

  auto* analyze = app.add_subcommand("analyze", "full stability report for one equilibrium");
  add_equilibrium_flags(analyze, v, opt);

  auto* simulate = app.add_subcommand("simulate", "integrate and export a CSV trajectory");
  opt.add("sim-state",
          simulate->add_option("--state", v.sim_state_csv, "initial state M1,M2,M3,g1,g2,g3"));
  opt.add("T", simulate->add_option("--T", v.T, "time horizon"));
  opt.add("dt", simulate->add_option("--dt", v.dt, "integration step"));
  simulate->add_flag("--general", v.general, "include the gravity torque term");

  auto* perturb = app.add_subcommand("perturb", "random perturbation experiment");
  add_equilibrium_flags(perturb, v, opt);
  opt.add("delta0", perturb->add_option("--delta0", v.delta0, "perturbation magnitude"));
  opt.add("samples", perturb->add_option("--samples", v.samples, "number of perturbed samples"));
  opt.add("T", perturb->add_option("--T", v.T, "time horizon"));
  opt.add("dt", perturb->add_option("--dt", v.dt, "integration step"));
  opt.add("threshold", perturb->add_option("--threshold", v.threshold, "escape threshold"));

  auto* verify = app.add_subcommand("verify", "run the cross-validation suite");
  verify->add_flag("--self-test-corrupt-rhs", v.corrupt, "inject a field sign error (self test)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gyrostab::cli::kConfigError;
  }

  try {
    RunConfig config;
    if (opt.passed("config"))
      gyrostab::cli::apply_ini(config, gyrostab::cli::parse_ini(v.config_path));

    if (opt.passed("I1")) config.params.I1 = v.I1;
    if (opt.passed("I2")) config.params.I2 = v.I2;
    if (opt.passed("I3")) config.params.I3 = v.I3;
    if (opt.passed("mu-vec")) {
      config.params.mu = gyrostab::cli::parse_state_csv(v.mu_vec + ",0,0,0").M;
    } else if (opt.passed("mu") || opt.passed("mu-axis")) {
      if (!(opt.passed("mu") && opt.passed("mu-axis")))
        throw ConfigError("--mu and --mu-axis must be given together");
      if (v.mu_axis < 1 || v.mu_axis > 3) throw ConfigError("--mu-axis must be 1, 2 or 3");
      config.params.mu = gyrostab::linalg::Vec3::Zero();
      config.params.mu(v.mu_axis - 1) = v.mu;
    }
    if (opt.passed("mass")) config.params.mass = v.mass;
    if (opt.passed("r-g")) config.params.r_G = gyrostab::cli::parse_state_csv(v.r_g_vec + ",0,0,0").M;
    if (opt.passed("out")) config.out_path = v.out_path;
    if (opt.passed("seed")) config.seed = v.seed;

    if (opt.passed("family")) config.equilibrium.family = v.family;
    if (opt.passed("eq-state"))
      config.equilibrium.raw_state = gyrostab::cli::parse_state_csv(v.eq_state_csv);
    if (opt.passed("sim-state"))
      config.initial_state = gyrostab::cli::parse_state_csv(v.sim_state_csv);

    const std::pair<const char*, double*> family_params[] = {
        {"q", &v.q},           {"alpha", &v.alpha},   {"beta", &v.beta},  {"theta", &v.theta},
        {"alpha1", &v.alpha1}, {"alpha2", &v.alpha2}, {"alpha3", &v.alpha3}};
    for (const auto& [name, value] : family_params)
      if (opt.passed(name)) config.equilibrium.values[name] = *value;

    if (opt.passed("T")) config.horizon = v.T;
    if (opt.passed("dt")) config.dt = v.dt;
    if (opt.passed("delta0")) config.delta0 = v.delta0;
    if (opt.passed("samples")) config.samples = v.samples;
    if (opt.passed("threshold")) config.escape_threshold = v.threshold;
    config.general = v.general;
    config.corrupt_rhs = v.corrupt;

    if (enumerate->parsed()) return gyrostab::cli::cmd_enumerate(config, std::cout);
    if (analyze->parsed()) return gyrostab::cli::cmd_analyze(config, std::cout);
    if (simulate->parsed()) return gyrostab::cli::cmd_simulate(config, std::cout, std::cerr);
    if (perturb->parsed()) return gyrostab::cli::cmd_perturb(config, std::cout);
    if (verify->parsed()) return gyrostab::cli::cmd_verify(config, std::cout);
    throw ConfigError("no command selected");
  } catch (const gyrostab::skewprod::NotAnEquilibrium& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gyrostab::cli::kNotAnEquilibrium;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gyrostab::cli::kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gyrostab::cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}

#include "gyrostab/commands.hpp"

#include "gyrostab/numerics.hpp"
#include "gyrostab/report_io.hpp"
#include "gyrostab/verify.hpp"

#include <fstream>
#include <iostream>
#include <ostream>

namespace gyrostab::cli {

namespace {

constexpr double kClassifyTol = 1e-9;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << content;
}

std::string undecided_note(const gyrostat::Params& params) {
  const int axis = params.mu_axis().value();
  return std::string("E12 with q = -mu") + std::to_string(axis) +
         " and alpha != 0: spectrally stable, not stable with respect to the conserved "
         "quantities; Lyapunov and gamma verdicts remain undecided";
}

/// Resolves the equilibrium requested by the config, either instantiating
/// a family or classifying a raw state.
gyrostat::EquilibriumState resolve_equilibrium(const RunConfig& config) {
  const auto& spec = config.equilibrium;
  if (spec.raw_state) {
    const auto cls = gyrostat::classify_state(config.params, *spec.raw_state, kClassifyTol);
    if (!cls.is_equilibrium)
      throw gyrostat::NotAnEquilibrium("the supplied state does not zero the field");
    if (!cls.equilibrium)
      throw gyrostat::NotAnEquilibrium(
          "the supplied state is an equilibrium but matches no family template");
    return *cls.equilibrium;
  }
  if (!spec.family) throw ConfigError("specify an equilibrium family or a raw state");
  const auto family = gyrostat::parse_family(*spec.family);
  if (!family) throw ConfigError("unknown family '" + *spec.family + "'");
  for (const auto& tmpl : gyrostat::enumerate_families(config.params)) {
    if (tmpl.family == *family) return tmpl.instantiate(config.params, spec.values);
  }
  throw ConfigError("family " + *spec.family + " does not exist for this mu axis");
}

}  // namespace

int cmd_enumerate(const RunConfig& config, std::ostream& out) {
  validate_analytic(config);
  const auto families = gyrostat::enumerate_families(config.params);
  const int axis = config.params.mu_axis().value();

  out << "equilibrium families for mu along axis " << axis << ":\n";
  Json jfamilies = Json::array();
  for (const auto& f : families) {
    out << "  " << gyrostat::to_string(f.family) << ": " << f.description << "\n";
    Json jf;
    jf["family"] = gyrostat::to_string(f.family);
    jf["axis"] = f.axis;
    jf["free_params"] = f.free_params;
    jf["description"] = f.description;
    jfamilies.push_back(std::move(jf));
  }
  const std::string note = undecided_note(config.params);
  out << "  note: " << note << "\n";

  Json doc;
  doc["params"] = to_json(config.params);
  doc["families"] = std::move(jfamilies);

  // With free-parameter values supplied, also print the concrete states.
  Json jconcrete = Json::array();
  for (const auto& f : families) {
    bool have_all = true;
    for (const auto& name : f.free_params)
      if (!config.equilibrium.values.count(name)) have_all = false;
    if (!have_all) continue;
    try {
      const auto eq = f.instantiate(config.params, config.equilibrium.values);
      out << "  " << gyrostat::to_string(f.family) << " at";
      for (const auto& [k, v] : eq.params) out << " " << k << "=" << v;
      out << ": M = (" << eq.state.M.transpose() << "), gamma = ("
          << eq.state.gamma.transpose() << ")\n";
      jconcrete.push_back(to_json(eq));
    } catch (const std::invalid_argument&) {
      // zero q/beta: template not instantiable at these values
    }
  }
  if (!jconcrete.empty()) doc["equilibria"] = std::move(jconcrete);
  doc["notes"] = Json::array({note});

  if (config.out_path) write_file(*config.out_path, doc.dump(2) + "\n");
  return kOk;
}

int cmd_analyze(const RunConfig& config, std::ostream& out) {
  validate_analytic(config);
  const auto eq = resolve_equilibrium(config);

  ReportDocument doc;
  doc.params = config.params;
  doc.entries.push_back({eq, gyrostat::analyze(config.params, eq)});
  if (eq.family == gyrostat::Family::E12) doc.notes.push_back(undecided_note(config.params));

  const std::string text = to_json(doc).dump(2) + "\n";
  out << text;
  if (config.out_path) write_file(*config.out_path, text);
  return kOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!config.initial_state) throw ConfigError("simulate requires an initial state");
  if (!(config.dt > 0.0) || !(config.horizon > 0.0))
    throw ConfigError("simulate requires T > 0 and dt > 0");

  const auto traj = numerics::integrate(config.params, *config.initial_state, config.horizon,
                                        config.dt, config.general);
  if (config.out_path) {
    std::ofstream file(*config.out_path);
    if (!file) throw ConfigError("cannot open output file '" + *config.out_path + "'");
    write_trajectory_csv(file, config.params, traj);
  } else {
    write_trajectory_csv(out, config.params, traj);
  }
  write_drift_summary(err, config.params, traj);
  if (traj.blew_up) {
    err << "trajectory truncated: state norm exceeded " << numerics::kBlowUpNorm << "\n";
    return kBlowUp;
  }
  return kOk;
}

int cmd_perturb(const RunConfig& config, std::ostream& out) {
  validate_analytic(config);
  if (!(config.delta0 >= 0.0)) throw ConfigError("delta0 must be nonnegative");
  if (config.samples < 1) throw ConfigError("need at least one sample");

  const auto eq = resolve_equilibrium(config);
  const auto result =
      numerics::perturb_experiment(config.params, eq, config.delta0, config.samples,
                                   config.horizon, config.dt, config.seed,
                                   config.escape_threshold);
  const auto empirical = numerics::empirical_verdict(result, result.escape_threshold);

  Json doc = to_json(result, empirical);
  doc["equilibrium"] = to_json(eq);
  const std::string text = doc.dump(2) + "\n";
  out << text;
  if (config.out_path) write_file(*config.out_path, text);
  return kOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  validate_analytic(config);
  verify::Options opts;
  opts.params = config.params;
  opts.seed = config.seed;
  if (config.corrupt_rhs) {
    const gyrostat::Params p = config.params;
    opts.rhs_override = [p](const gyrostat::State& s) {
      gyrostat::State d = gyrostat::rhs(p, s);
      d.M = -d.M;  // injected sign error
      return d;
    };
  }

  const auto checks = verify::run_all(opts);
  write_check_lines(out, checks);

  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c.pass;
  out << (all_pass ? "verify: all checks passed\n" : "verify: FAILURES present\n");

  if (config.out_path) {
    Json doc = Json::array();
    for (const auto& c : checks)
      doc.push_back(Json{{"name", c.name},
                         {"pass", c.pass},
                         {"observed", c.observed},
                         {"tolerance", c.tolerance},
                         {"detail", c.detail}});
    write_file(*config.out_path, doc.dump(2) + "\n");
  }
  return all_pass ? kOk : kVerifyFailure;
}

}  // namespace gyrostab::cli

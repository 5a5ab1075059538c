#include "gyrostab/report_io.hpp"

#include "gyrostab/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

namespace gyrostab::cli {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json vec3_json(const linalg::Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

linalg::Vec3 vec3_from(const Json& j) {
  return linalg::Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

skewprod::Stability stability_from(const std::string& s) {
  if (s == "stable") return skewprod::Stability::Stable;
  if (s == "unstable") return skewprod::Stability::Unstable;
  if (s == "undecided") return skewprod::Stability::Undecided;
  throw std::invalid_argument("unknown verdict value '" + s + "'");
}

skewprod::Verdict verdict_from(const Json& j) {
  return {stability_from(j.at("verdict").get<std::string>()),
          j.at("justification").get<std::string>()};
}

}  // namespace

Json to_json(const gyrostat::Params& params) {
  Json j;
  j["I1"] = params.I1;
  j["I2"] = params.I2;
  j["I3"] = params.I3;
  j["mu"] = vec3_json(params.mu);
  if (params.mass != 0.0 || params.r_G.norm() != 0.0) {
    j["mass"] = params.mass;
    j["r_G"] = vec3_json(params.r_G);
  }
  return j;
}

Json to_json(const skewprod::Verdict& verdict) {
  Json j;
  j["verdict"] = skewprod::to_string(verdict.value);
  j["justification"] = verdict.justification;
  return j;
}

Json to_json(const gyrostat::EquilibriumState& eq) {
  Json j;
  j["family"] = gyrostat::to_string(eq.family);
  j["axis"] = eq.axis;
  Json p = Json::object();
  for (const auto& [key, value] : eq.params) p[key] = value;
  j["parameters"] = std::move(p);
  j["state"] = Json{{"M", vec3_json(eq.state.M)}, {"gamma", vec3_json(eq.state.gamma)}};
  return j;
}

Json to_json(const skewprod::StabilityReport& report) {
  Json j;
  j["spectral"] = to_json(report.spectral);
  j["cq"] = to_json(report.cq);
  j["lyapunov"] = to_json(report.lyapunov);
  j["m_partial"] = to_json(report.y_partial);
  j["gamma_partial"] = to_json(report.z_partial);
  Json spectrum = Json::array();
  for (const auto& v : report.spectrum.values())
    spectrum.push_back(Json::array({v.real(), v.imag()}));
  j["spectrum"] = std::move(spectrum);
  return j;
}

Json to_json(const ReportDocument& doc) {
  Json j;
  j["params"] = to_json(doc.params);
  Json entries = Json::array();
  for (const auto& e : doc.entries) {
    Json entry = to_json(e.equilibrium);
    entry["report"] = to_json(e.report);
    entries.push_back(std::move(entry));
  }
  j["equilibria"] = std::move(entries);
  if (!doc.notes.empty()) j["notes"] = doc.notes;
  return j;
}

Json to_json(const numerics::PerturbationResult& result, const skewprod::Verdict& empirical) {
  Json j;
  j["delta0"] = result.delta0;
  j["horizon"] = result.horizon;
  j["dt"] = result.dt;
  j["samples"] = result.n_samples;
  j["seed"] = result.seed;
  j["escape_threshold"] = result.escape_threshold;
  j["max_dev_M"] = result.max_dev_M;
  j["max_dev_gamma"] = result.max_dev_gamma;
  j["max_dev_full"] = result.max_dev_full;
  Json samples = Json::array();
  for (const auto& s : result.samples) {
    samples.push_back(Json{{"max_dev_M", s.max_dev_M},
                           {"max_dev_gamma", s.max_dev_gamma},
                           {"max_dev_full", s.max_dev_full},
                           {"escaped", s.escaped}});
  }
  j["per_sample"] = std::move(samples);
  j["empirical"] = to_json(empirical);
  return j;
}

ReportDocument report_document_from_json(const Json& j) {
  ReportDocument doc;
  const auto& p = j.at("params");
  doc.params.I1 = p.at("I1");
  doc.params.I2 = p.at("I2");
  doc.params.I3 = p.at("I3");
  doc.params.mu = vec3_from(p.at("mu"));
  if (p.contains("mass")) doc.params.mass = p.at("mass");
  if (p.contains("r_G")) doc.params.r_G = vec3_from(p.at("r_G"));

  for (const auto& entry : j.at("equilibria")) {
    ReportDocument::Entry e;
    const auto family = gyrostat::parse_family(entry.at("family").get<std::string>());
    if (!family) throw std::invalid_argument("unknown family in report document");
    e.equilibrium.family = *family;
    e.equilibrium.axis = entry.at("axis");
    for (const auto& [key, value] : entry.at("parameters").items())
      e.equilibrium.params.emplace_back(key, value.get<double>());
    e.equilibrium.state.M = vec3_from(entry.at("state").at("M"));
    e.equilibrium.state.gamma = vec3_from(entry.at("state").at("gamma"));

    const auto& r = entry.at("report");
    e.report.spectral = verdict_from(r.at("spectral"));
    e.report.cq = verdict_from(r.at("cq"));
    e.report.lyapunov = verdict_from(r.at("lyapunov"));
    e.report.y_partial = verdict_from(r.at("m_partial"));
    e.report.z_partial = verdict_from(r.at("gamma_partial"));
    std::vector<std::complex<double>> spectrum;
    for (const auto& v : r.at("spectrum"))
      spectrum.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    e.report.spectrum = linalg::ComplexSpectrum(std::move(spectrum));
    doc.entries.push_back(std::move(e));
  }
  if (j.contains("notes"))
    for (const auto& note : j.at("notes")) doc.notes.push_back(note.get<std::string>());
  return doc;
}

void write_trajectory_csv(std::ostream& out, const gyrostat::Params& params,
                          const numerics::Trajectory& traj) {
  out << "t,M1,M2,M3,g1,g2,g3,H,C1,C2,F\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    const auto c = gyrostat::conserved(params, s);
    out << fmt17(traj.times[k]) << ',' << fmt17(s.M.x()) << ',' << fmt17(s.M.y()) << ','
        << fmt17(s.M.z()) << ',' << fmt17(s.gamma.x()) << ',' << fmt17(s.gamma.y()) << ','
        << fmt17(s.gamma.z()) << ',' << fmt17(c.H) << ',' << fmt17(c.C1) << ',' << fmt17(c.C2)
        << ',' << fmt17(c.F) << '\n';
  }
  if (traj.blew_up)
    out << "# truncated: state norm exceeded " << fmt17(numerics::kBlowUpNorm) << " at t = "
        << fmt17(traj.times.back()) << "\n";
}

void write_drift_summary(std::ostream& out, const gyrostat::Params& params,
                         const numerics::Trajectory& traj) {
  static const char* names[4] = {"H", "C1", "C2", "F"};
  const auto drifts = numerics::conserved_drift(params, traj);
  const auto c0 = gyrostat::conserved(params, traj.front());
  const double refs[4] = {c0.H, c0.C1, c0.C2, c0.F};
  out << "drift over [0, " << traj.times.back() << "]:";
  for (int q = 0; q < 4; ++q) {
    out << "  " << names[q] << " " << fmt17(drifts[q]) << " (rel "
        << fmt17(drifts[q] / (1.0 + std::abs(refs[q]))) << ")";
  }
  out << "\n";
}

void write_check_lines(std::ostream& out, const std::vector<verify::CheckResult>& checks) {
  for (const auto& c : checks) {
    char line[512];
    std::snprintf(line, sizeof line, "%-24s %s  observed %.3e  tolerance %.3e  %s", c.name.c_str(),
                  c.pass ? "PASS" : "FAIL", c.observed, c.tolerance, c.detail.c_str());
    out << line << "\n";
  }
}

}  // namespace gyrostab::cli

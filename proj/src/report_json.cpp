#include "relsub/report_json.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "relsub/errors.hpp"
#include "relsub/io.hpp"

namespace relsub {

namespace {

using json = nlohmann::ordered_json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i]))
      a.push_back(v[i]);
    else
      a.push_back(nullptr);
  }
  return a;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vec vec_from_json(const json& a) {
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

}  // namespace

std::string estimate_report_json(const EstimateReport& report, const ModelKind& model,
                                 std::uint64_t seed, double time_scale) {
  json j;
  j["model"] = model.name();
  if (model.tag == ModelTag::Glfp) j["pi_g"] = model.glfp_mixing;
  j["method"] = method_name(report.method);
  j["theta"] = vec_to_json(report.theta_tilde.values);
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["grad_norm"] = report.final_grad_norm;
  j["draws_used"] = report.draws_used;
  if (report.pilot_theta) j["pilot_theta"] = vec_to_json(report.pilot_theta->values);
  if (report.cov) {
    j["cov"] = mat_to_json(report.cov->v_hat);
    j["ese"] = vec_to_json(report.cov->ese);
    j["gamma"] = report.cov->gamma;
  }
  j["seed"] = seed;
  j["time_scale"] = time_scale;
  return j.dump(2) + "\n";
}

std::string sim_summary_json(const SimSummary& summary) {
  json j;
  j["model"] = summary.model.name();
  if (summary.model.tag == ModelTag::Glfp) j["pi_g"] = summary.model.glfp_mixing;
  j["m"] = summary.m;
  j["reference"] = reference_name(summary.reference);
  j["seed"] = summary.seed;
  j["mean_alpha"] = summary.mean_alpha;
  j["reference_failures"] = summary.reference_failures;
  json ests = json::array();
  for (const EstimatorSummary& e : summary.estimators) {
    json je;
    je["method"] = method_name(e.method);
    je["successes"] = e.successes;
    je["failures"] = e.failures;
    je["rmse"] = vec_to_json(e.rmse);
    je["bias"] = vec_to_json(e.bias);
    je["se"] = vec_to_json(e.se);
    je["cp"] = vec_to_json(e.cp);
    je["mean_ese"] = vec_to_json(e.mean_ese);
    je["rmse_total"] = e.rmse_total;
    ests.push_back(std::move(je));
  }
  j["estimators"] = std::move(ests);
  return j.dump(2) + "\n";
}

std::string sim_summary_csv(const SimSummary& summary) {
  std::ostringstream out;
  out << "estimator,parameter,rmse,bias,se,cp,mean_ese,rmse_total,successes,failures\n";
  for (const EstimatorSummary& e : summary.estimators)
    for (Eigen::Index k = 0; k < e.rmse.size(); ++k)
      out << method_name(e.method) << ',' << k << ',' << format_double(e.rmse[k]) << ','
          << format_double(e.bias[k]) << ',' << format_double(e.se[k]) << ','
          << format_double(e.cp[k]) << ',' << format_double(e.mean_ese[k]) << ','
          << format_double(e.rmse_total) << ',' << e.successes << ',' << e.failures << '\n';
  return out.str();
}

std::string sim_timing_json(const SimSummary& summary) {
  json j;
  json ests = json::array();
  for (const EstimatorSummary& e : summary.estimators) {
    json je;
    je["method"] = method_name(e.method);
    je["mean_wall_time_s"] = e.mean_wall_time;
    ests.push_back(std::move(je));
  }
  j["estimators"] = std::move(ests);
  return j.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "alpha,estimator,parameter,rmse,bias,se,cp,mean_ese,rmse_total,successes,failures\n";
  for (const SweepPoint& p : points) {
    if (!p.summary) continue;
    for (const EstimatorSummary& e : p.summary->estimators)
      for (Eigen::Index k = 0; k < e.rmse.size(); ++k)
        out << format_double(p.alpha) << ',' << method_name(e.method) << ',' << k << ','
            << format_double(e.rmse[k]) << ',' << format_double(e.bias[k]) << ','
            << format_double(e.se[k]) << ',' << format_double(e.cp[k]) << ','
            << format_double(e.mean_ese[k]) << ',' << format_double(e.rmse_total) << ','
            << e.successes << ',' << e.failures << '\n';
  }
  return out.str();
}

std::string mttf_report_json(const MttfReport& report) {
  json j;
  j["mttf"] = report.mttf_model_scale;
  j["mttf_original_units"] = report.mttf_original_units;
  j["method"] = method_name(report.method);
  j["seed"] = report.seed;
  j["time_scale"] = report.time_scale;
  return j.dump(2) + "\n";
}

StoredEstimate load_estimate_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ValidationError("bad report json: " + std::string(ex.what()));
  }
  StoredEstimate st;
  st.model = ModelKind::parse(j.at("model").get<std::string>(),
                              j.value("pi_g", 0.054));
  st.report.method = parse_method(j.at("method").get<std::string>());
  st.report.theta_tilde = ParamVector(st.model, vec_from_json(j.at("theta")));
  st.report.converged = j.at("converged").get<bool>();
  st.seed = j.value("seed", std::uint64_t{0});
  st.time_scale = j.value("time_scale", 1.0);
  return st;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << content;
}

}  // namespace relsub

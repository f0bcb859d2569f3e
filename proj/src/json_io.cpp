#include "chaos_bounds/json_io.hpp"

namespace chaos_bounds {

namespace {

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json report_json(const GaussianBoundReport& r) {
  Json j;
  j["dw_bound"] = r.dw_bound;
  j["dk_bound"] = r.dk_bound;
  j["vacuous"] = r.vacuous;
  j["inputs"] = r.inputs;
  j["warnings"] = r.warnings;
  return j;
}

Json report_json(const DeltaResult& r) {
  return {{"delta", r.delta}, {"case", r.case_label}, {"nu", r.nu}};
}

Json report_json(const ProbabilityBound& r) { return {{"value", r.value}, {"vacuous", r.vacuous}}; }

Json report_json(const MarkGammaCheck& r) {
  return {{"holds", r.holds}, {"first_fail", optional_int(r.first_fail)}};
}

Json report_json(const CumulantConditionReport& r) {
  Json terms = Json::array();
  for (const auto& t : r.per_m) {
    terms.push_back({{"m", t.m},
                     {"lhs", t.lhs},
                     {"rhs", t.rhs},
                     {"log_lhs", t.log_lhs},
                     {"log_rhs", t.log_rhs},
                     {"pass", t.pass}});
  }
  Json j;
  j["m_min"] = r.m_min;
  j["m_max"] = r.m_max;
  j["all_pass"] = r.all_pass;
  j["first_fail"] = optional_int(r.first_fail);
  j["per_m"] = std::move(terms);
  return j;
}

Json report_json(const Interval& r) { return {{"lower", r.lower}, {"upper", r.upper}}; }

Json report_json(const InsuranceTailReport& r) {
  return {{"threshold", r.threshold},
          {"bound", r.bound},
          {"simplified", r.simplified},
          {"vacuous", r.vacuous},
          {"proven_regime", r.proven_regime}};
}

Json report_json(const TotalLossInterval& r) {
  return {{"center", r.center},
          {"half_width", r.half_width},
          {"lower", r.center - r.half_width},
          {"upper", r.center + r.half_width},
          {"prob_lower_bound", r.prob_lower_bound},
          {"vacuous", r.vacuous},
          {"proven_regime", r.proven_regime}};
}

Json report_json(const ProgenyMomentTable& r) {
  return {{"n_max", r.n_max}, {"moments", r.moments}};
}

Json report_json(const SeriesResult& r) {
  return {{"value", r.value}, {"tail_bound", r.tail_bound}, {"terms", r.terms}};
}

Json report_json(const CertifiedSum& r) {
  return {{"center", r.center}, {"radius", r.radius}, {"lower", r.lower()}, {"upper", r.upper()}};
}

Json report_json(const Standardization& r) { return {{"mean", r.mean}, {"sd", r.sd}}; }

Json report_json(const EmpiricalDistanceReport& r) {
  return {{"n", r.n},
          {"dk_emp", r.dk_emp},
          {"dw_emp", r.dw_emp},
          {"dkw_margin", r.dkw_margin},
          {"standardization", report_json(r.standardization)}};
}

Json report_json(const VerificationCheck& r) {
  return {{"name", r.name},
          {"empirical", r.empirical},
          {"reference", r.reference},
          {"margin", r.margin},
          {"applicable", r.applicable},
          {"pass", r.pass}};
}

Json report_json(const VerificationReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["n"] = r.n;
  j["calibration_n"] = r.calibration_n;
  j["seed"] = r.seed;
  j["scenario"] = r.scenario;
  j["standardization"] = r.standardization ? report_json(*r.standardization) : Json(nullptr);
  j["bounds"] = r.bounds;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(report_json(c));
  j["checks"] = std::move(checks);
  j["pass"] = r.pass;
  return j;
}

}  // namespace chaos_bounds

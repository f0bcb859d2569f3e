#pragma once

#include "chaos_bounds/deviations.hpp"
#include "chaos_bounds/gaussian_bounds.hpp"
#include "chaos_bounds/progeny.hpp"
#include "chaos_bounds/simulate.hpp"
#include "json.hpp"

namespace chaos_bounds {

using Json = nlohmann::ordered_json;

// Report serialisation. Key order is fixed, so equal reports dump to equal bytes.
Json report_json(const GaussianBoundReport& r);
Json report_json(const DeltaResult& r);
Json report_json(const ProbabilityBound& r);
Json report_json(const MarkGammaCheck& r);
Json report_json(const CumulantConditionReport& r);
Json report_json(const Interval& r);
Json report_json(const InsuranceTailReport& r);
Json report_json(const TotalLossInterval& r);
Json report_json(const ProgenyMomentTable& r);
Json report_json(const SeriesResult& r);
Json report_json(const CertifiedSum& r);
Json report_json(const Standardization& r);
Json report_json(const EmpiricalDistanceReport& r);
Json report_json(const VerificationCheck& r);
Json report_json(const VerificationReport& r);

}  // namespace chaos_bounds

#pragma once

#include "ginibre/ensemble.hpp"
#include "ginibre/scaling.hpp"
#include "ginibre/stats.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace ginibre {

enum class Reference { gauss, tw2 };
Reference parse_reference(const std::string& s);
std::string to_string(Reference r);

// F_2(s), with 0 below s = -12 and 1 above s = 10.
double tw2_reference_cdf(double s);

struct AnalysisReport {
    Reference reference = Reference::gauss;
    int k = 1;
    RhoMode rho_mode = RhoMode::corrected;
    EdgeScaling scaling;
    std::size_t used = 0;
    std::size_t excluded = 0;  // degenerate records or fewer than k reliable values
    MomentSummary moments;
    KsResult ks;
    std::vector<double> rescaled;
};

// gauss: (x_k - center(k)) / scale(k) against the standard normal.
// tw2: rho (x_1 - log lambda) against F_2.
AnalysisReport analyze_dataset(const SampleDataset& d, Reference ref, int k = 1,
                               RhoMode mode = RhoMode::corrected);

nlohmann::json to_json(const AnalysisReport& r);

}  // namespace ginibre

#include "ginibre/analysis.hpp"

#include "ginibre/errors.hpp"
#include "ginibre/format.hpp"
#include "ginibre/fredholm.hpp"
#include "ginibre/specfun.hpp"

namespace ginibre {

Reference parse_reference(const std::string& s) {
    if (s == "gauss") return Reference::gauss;
    if (s == "tw2") return Reference::tw2;
    throw DomainError("unknown reference law '" + s + "' (expected gauss or tw2)");
}

std::string to_string(Reference r) { return r == Reference::gauss ? "gauss" : "tw2"; }

double tw2_reference_cdf(double s) {
    if (s < -12.0) return 0.0;
    if (s > 10.0) return 1.0;
    return tw2_cdf(s).value;
}

AnalysisReport analyze_dataset(const SampleDataset& d, Reference ref, int k, RhoMode mode) {
    if (d.records.empty()) throw DomainError("analyze: dataset has no records");
    if (k < 1 || k > d.profile.N) throw DomainError("analyze: k must satisfy 1 <= k <= N");
    if (ref == Reference::tw2 && k != 1) throw DomainError("analyze: the tw2 reference applies to k = 1 only");

    AnalysisReport r;
    r.reference = ref;
    r.k = k;
    r.rho_mode = mode;
    r.scaling = compute_scaling(d.profile);
    for (const auto& rec : d.records) {
        if (rec.degenerate || rec.reliable_count < k || static_cast<int>(rec.log_spectrum.size()) < k) {
            ++r.excluded;
            continue;
        }
        const double x = rec.log_spectrum[static_cast<std::size_t>(k - 1)];
        r.rescaled.push_back(ref == Reference::gauss ? rescale_high_dwr(x, k, d.profile)
                                                     : rescale_low_dwr(x, r.scaling, mode));
    }
    r.used = r.rescaled.size();
    if (r.used == 0) throw DomainError("analyze: no record has " + std::to_string(k) + " reliable values");
    r.moments = summarize(r.rescaled);
    if (ref == Reference::gauss)
        r.ks = ks_statistic(r.rescaled, std_normal_cdf);
    else
        r.ks = ks_statistic(r.rescaled, tw2_reference_cdf);
    return r;
}

nlohmann::json to_json(const AnalysisReport& r) {
    nlohmann::json j;
    j["reference"] = to_string(r.reference);
    j["k"] = r.k;
    if (r.reference == Reference::tw2) j["rho_mode"] = to_string(r.rho_mode);
    j["scaling"] = to_json(r.scaling);
    j["used"] = r.used;
    j["excluded"] = r.excluded;
    j["mean"] = format_real(r.moments.mean);
    j["variance"] = format_real(r.moments.variance);
    j["std"] = format_real(r.moments.stddev);
    j["min"] = format_real(r.moments.min);
    j["max"] = format_real(r.moments.max);
    j["ks"] = format_real(r.ks.d);
    j["ks_plus"] = format_real(r.ks.d_plus);
    j["ks_minus"] = format_real(r.ks.d_minus);
    return j;
}

}  // namespace ginibre

#include "ginibre/ensemble.hpp"
#include "ginibre/format.hpp"

#include "json.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace ginibre {

namespace {

constexpr const char* format_tag = "ginibre-edge-dataset";

std::uint64_t parse_u64(const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw DomainError("dataset: bad 64-bit integer '" + s + "'");
    return v;
}

}  // namespace

void write_dataset(std::ostream& os, const SampleDataset& d) {
    nlohmann::json h = {{"type", "header"},
                        {"format", format_tag},
                        {"version", GINIBRE_VERSION},
                        {"profile", to_json(d.profile)},
                        {"master_seed", std::to_string(d.master_seed)},
                        {"precision_bits", d.precision_bits},
                        {"mode", to_string(d.mode)},
                        {"samples", d.records.size()}};
    os << h.dump() << '\n';
    for (const auto& r : d.records) {
        nlohmann::json j = {{"index", r.sample_index},
                            {"seed", std::to_string(r.derived_seed)},
                            {"spectrum", format_reals(r.log_spectrum)},
                            {"reliable_count", r.reliable_count},
                            {"degenerate", r.degenerate}};
        os << j.dump() << '\n';
    }
    if (!os) throw DomainError("dataset: write failed");
}

SampleDataset read_dataset(std::istream& is) {
    std::string line;
    SampleDataset d;
    bool have_header = false;
    std::size_t expected = 0;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DomainError("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
        try {
            if (!have_header) {
                if (j.value("type", "") != "header" || j.value("format", "") != format_tag)
                    throw DomainError("dataset: first line is not a dataset header");
                d.profile = profile_from_json(j.at("profile"));
                d.master_seed = parse_u64(j.at("master_seed").get<std::string>());
                d.precision_bits = j.at("precision_bits").get<int>();
                d.mode = parse_spectrum_mode(j.at("mode").get<std::string>());
                expected = j.at("samples").get<std::size_t>();
                have_header = true;
                continue;
            }
            SampleRecord r;
            r.sample_index = j.at("index").get<int>();
            r.derived_seed = parse_u64(j.at("seed").get<std::string>());
            r.log_spectrum = parse_reals(j.at("spectrum").get<std::vector<std::string>>());
            r.reliable_count = j.at("reliable_count").get<int>();
            r.degenerate = j.value("degenerate", false);
            d.records.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw DomainError("dataset line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header) throw DomainError("dataset: empty input (no header)");
    if (d.records.size() != expected)
        throw DomainError("dataset: header announces " + std::to_string(expected) + " records, found " +
                          std::to_string(d.records.size()));
    return d;
}

}  // namespace ginibre

#pragma once

#include "ginibre/linalg.hpp"
#include "ginibre/profile.hpp"
#include "ginibre/scaling.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ginibre {

std::uint64_t splitmix64(std::uint64_t x);
// Order-independent child seed for (parent, index).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

// xoshiro256** seeded through splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    double uniform();  // [0, 1)
    // Standard complex Gaussian: re, im ~ N(0, 1/2).
    std::complex<double> complex_normal();

private:
    std::uint64_t s_[4];
};

ComplexMatrix sample_ginibre(int rows, int cols, std::uint64_t seed);

struct SampleRecord {
    int sample_index = 0;
    std::uint64_t derived_seed = 0;
    std::vector<double> log_spectrum;  // descending
    int reliable_count = 0;
    bool degenerate = false;

    bool operator==(const SampleRecord&) const = default;
};

struct SimulationConfig {
    PrecisionContext ctx{};
    SpectrumMode mode = SpectrumMode::dense;
};

SampleRecord simulate_product(const DimensionProfile& p, std::uint64_t seed, const SimulationConfig& cfg = {});

struct SampleDataset {
    DimensionProfile profile;
    std::uint64_t master_seed = 0;
    int precision_bits = 53;
    SpectrumMode mode = SpectrumMode::dense;
    std::vector<SampleRecord> records;
};

SampleDataset run_monte_carlo(const DimensionProfile& p, int samples, std::uint64_t master_seed,
                              const SimulationConfig& cfg = {}, int workers = 1);

// Mantissa bits after which the k largest values of a typical sample stay
// above the reliability floor: (center(1) - center(k)) / ln 2 + 64, and 53
// for k = 1.
int suggested_precision_bits(const DimensionProfile& p, int k);

double rescale_high_dwr(double x_k, int k, const DimensionProfile& p);
double rescale_low_dwr(double x_max, const EdgeScaling& s, RhoMode mode = RhoMode::corrected);

void write_dataset(std::ostream& os, const SampleDataset& d);
SampleDataset read_dataset(std::istream& is);

}  // namespace ginibre

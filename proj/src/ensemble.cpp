#include "ginibre/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace ginibre {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) {
        x = splitmix64(x);
        s = x;
    }
}

std::uint64_t Rng::next() {
    auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::complex<double> Rng::complex_normal() {
    // Box-Muller; |z|^2 = -ln u1 is exactly Exp(1).
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
}

ComplexMatrix sample_ginibre(int rows, int cols, std::uint64_t seed) {
    if (rows < 1 || cols < 1) throw DomainError("sample_ginibre: rows and cols must be >= 1");
    Rng rng(seed);
    ComplexMatrix x(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) x(i, j) = rng.complex_normal();
    return x;
}

SampleRecord simulate_product(const DimensionProfile& p, std::uint64_t seed, const SimulationConfig& cfg) {
    p.validate();
    std::vector<ComplexMatrix> factors;
    factors.reserve(p.v.size());
    for (int j = 1; j <= p.depth(); ++j)
        factors.push_back(sample_ginibre(p.dim(j), p.dim(j - 1), derive_seed(seed, static_cast<std::uint64_t>(j))));
    LogSpectrum ls = product_log_spectrum(factors, cfg.mode, cfg.ctx);
    SampleRecord r;
    r.derived_seed = seed;
    r.log_spectrum = std::move(ls.values);
    r.reliable_count = ls.reliable_count;
    for (std::size_t i = 1; i < r.log_spectrum.size(); ++i)
        if (!(r.log_spectrum[i] < r.log_spectrum[i - 1])) r.degenerate = true;
    return r;
}

SampleDataset run_monte_carlo(const DimensionProfile& p, int samples, std::uint64_t master_seed,
                              const SimulationConfig& cfg, int workers) {
    p.validate();
    if (samples < 1) throw DomainError("run_monte_carlo: samples must be >= 1");
    if (workers < 1) throw DomainError("run_monte_carlo: workers must be >= 1");
    cfg.ctx.tier_bits();

    SampleDataset d;
    d.profile = p;
    d.master_seed = master_seed;
    d.precision_bits = cfg.ctx.mantissa_bits;
    d.mode = cfg.mode;
    d.records.resize(static_cast<std::size_t>(samples));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    std::exception_ptr first_error;
    int first_error_index = samples;

    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= samples || failed.load()) return;
            try {
                SampleRecord r = simulate_product(p, derive_seed(master_seed, static_cast<std::uint64_t>(i)), cfg);
                r.sample_index = i;
                d.records[static_cast<std::size_t>(i)] = std::move(r);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };
    const int nthreads = std::min(workers, samples);
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            const std::string msg = "run_monte_carlo: sample " + std::to_string(first_error_index) + " failed: " + e.what();
            if (dynamic_cast<const NumericalError*>(&e)) throw NumericalError(msg);
            throw DomainError(msg);
        }
    }
    return d;
}

int suggested_precision_bits(const DimensionProfile& p, int k) {
    if (k <= 1) {
        gaussian_center(p, 1);
        return 53;
    }
    const double gap = gaussian_center(p, 1) - gaussian_center(p, k);
    return static_cast<int>(std::ceil(gap / std::log(2.0) + 64.0));
}

double rescale_high_dwr(double x_k, int k, const DimensionProfile& p) {
    return (x_k - gaussian_center(p, k)) / gaussian_scale(p, k);
}

double rescale_low_dwr(double x_max, const EdgeScaling& s, RhoMode mode) {
    return s.rho(mode) * (x_max - s.log_lambda);
}

}  // namespace ginibre

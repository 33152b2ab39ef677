#pragma once

#include "ginibre/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <string>

namespace ginibre {

template <unsigned Bits>
using SoftReal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Bits, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

// 53 selects double; larger values select the smallest software tier with at
// least that many mantissa bits.
struct PrecisionContext {
    int mantissa_bits = 53;

    static constexpr int tiers[] = {53, 113, 240, 512, 1024, 2048};

    int tier_bits() const {
        if (mantissa_bits < 53)
            throw DomainError("precision: mantissa_bits must be >= 53, got " + std::to_string(mantissa_bits));
        for (int t : tiers)
            if (mantissa_bits <= t) return t;
        throw DomainError("precision: mantissa_bits above 2048 not supported, got " +
                          std::to_string(mantissa_bits));
    }
};

// Calls f(Real{}) with the scalar type selected by ctx.
template <class F>
decltype(auto) with_precision(const PrecisionContext& ctx, F&& f) {
    switch (ctx.tier_bits()) {
        case 53: return f(double{});
        case 113: return f(SoftReal<113>{});
        case 240: return f(SoftReal<240>{});
        case 512: return f(SoftReal<512>{});
        case 1024: return f(SoftReal<1024>{});
        default: return f(SoftReal<2048>{});
    }
}

}  // namespace ginibre

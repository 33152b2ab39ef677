#include "ginibre/profile.hpp"

#include "ginibre/errors.hpp"

#include <sstream>

namespace ginibre {

DimensionProfile::DimensionProfile(int n, std::vector<int> offsets) : N(n), v(std::move(offsets)) {
    validate();
}

DimensionProfile DimensionProfile::square(int n, int m) {
    return DimensionProfile(n, std::vector<int>(static_cast<std::size_t>(m < 0 ? 0 : m), 0));
}

std::vector<double> DimensionProfile::dims() const {
    std::vector<double> out;
    out.reserve(v.size() + 1);
    out.push_back(N);
    for (int vj : v) out.push_back(N + vj);
    return out;
}

void DimensionProfile::validate() const {
    if (N < 1) throw DomainError("profile: N must be >= 1, got " + std::to_string(N));
    if (v.empty()) throw DomainError("profile: at least one factor (M >= 1) is required");
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] < 0)
            throw DomainError("profile: v_" + std::to_string(j + 1) + " = " + std::to_string(v[j]) +
                              " is negative");
    }
}

std::string DimensionProfile::describe() const {
    std::ostringstream os;
    os << "N=" << N << " M=" << v.size() << " v=(";
    for (std::size_t j = 0; j < v.size(); ++j) os << (j ? "," : "") << v[j];
    os << ")";
    return os.str();
}

}  // namespace ginibre

#pragma once

#include "ginibre/profile.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace ginibre {

enum class RhoMode { paper, corrected, exact };
enum class Regime { low, moderate, high };

RhoMode parse_rho_mode(const std::string& s);
std::string to_string(RhoMode m);
std::string to_string(Regime r);

struct EdgeScaling {
    DimensionProfile profile;
    double delta = 0;
    double z0 = 0;
    double log_lambda = 0;
    double rho_airy_paper = 0;
    double rho_airy_corrected = 0;
    double rho_airy_exact = 0;
    double residual_z0 = 0;  // |sum 1/(N+v_j+z0) - 1/z0|

    double rho(RhoMode mode) const;
};

double dwr(const DimensionProfile& p);
double gaussian_center(const DimensionProfile& p, int k);
double gaussian_scale(const DimensionProfile& p, int k);

struct Z0Diagnostics {
    int sign_changes = 0;
    std::vector<double> grid;
    std::vector<double> residual;  // z * (sum 1/(a_j+z) - 1/z) on the grid
};

double solve_z0(const DimensionProfile& p, double tol = 1e-13, Z0Diagnostics* diag = nullptr);
double log_lambda(const DimensionProfile& p, double z0);
double rho_airy(const DimensionProfile& p, double z0, RhoMode mode);
// F'''(z0) = sum psi''(z0 + N + v_j) - psi''(z0)
double phase_third_derivative(const DimensionProfile& p, double z0);

Regime classify_regime(double delta, double low_threshold = 0.2, double high_threshold = 5.0);

EdgeScaling compute_scaling(const DimensionProfile& p);

nlohmann::json to_json(const DimensionProfile& p);
DimensionProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EdgeScaling& s);
EdgeScaling scaling_from_json(const nlohmann::json& j);

}  // namespace ginibre

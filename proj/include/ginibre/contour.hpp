#pragma once

#include "ginibre/specfun.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ginibre {

struct Segment {
    enum class Kind { line, arc };
    Kind kind = Kind::line;
    Complex start{}, end{};
    Complex center{};    // arcs only
    double sweep = 0.0;  // arcs only: signed angle from start to end

    static Segment line(Complex a, Complex b);
    static Segment arc(Complex center, Complex start, double sweep);

    Complex point(double u) const;    // u in [0, 1]
    Complex tangent(double u) const;  // dz/du
    double length() const;
};

struct RefinementPolicy {
    double max_panel_length = 1.0;
    int max_depth = 40;
    double panel_tol = 1e-13;  // relative to the integral of |f|
};

struct ContourSpec {
    std::vector<Segment> segments;
    bool closed = false;
    bool positive = true;  // orientation flag for closed contours
    RefinementPolicy policy{};

    bool empty() const { return segments.empty(); }
    double length() const;
    // Consecutive segments must share endpoints; closed contours must end at
    // their start. Throws ConfigurationError otherwise.
    void validate() const;
    // Polyline approximation with at least `per_segment` points per segment.
    std::vector<Complex> sample(int per_segment = 64) const;
    double distance_to(Complex z) const;
    // Signed multiplicity with which a closed contour winds around z.
    int winding_number(Complex z) const;
    // Reversed traversal.
    ContourSpec reversed() const;
};

ContourSpec make_contour(std::vector<Segment> segs, bool closed, RefinementPolicy policy = {});

bool contours_intersect(const ContourSpec& a, const ContourSpec& b, double clearance = 0.0);
double contour_distance(const ContourSpec& a, const ContourSpec& b);

struct Panel {
    std::size_t segment = 0;
    double u0 = 0.0, u1 = 1.0;
};

struct QuadNode {
    Complex z;
    Complex w;  // Gauss weight times dz/du
};

std::vector<Panel> initial_panels(const ContourSpec& c);
std::vector<QuadNode> panel_nodes(const ContourSpec& c, const std::vector<Panel>& panels, int order);
std::vector<Panel> bisect_all(const std::vector<Panel>& panels);

struct RefinementResult {
    std::vector<Panel> panels;
    bool converged = true;
    double est_error = 0.0;  // sum of panel discrepancies
    double l1 = 0.0;         // integral of |f|
    std::string diagnostic;
};

// Bisects panels until the order-point rule and its two halves agree within
// policy.panel_tol times the integral of |f|, and every panel is shorter than
// both the policy maximum and length_limit at its midpoint.
RefinementResult refine_panels(const ContourSpec& c, const std::function<Complex(Complex)>& f, int order,
                               const std::function<double(Complex)>& length_limit = {});

}  // namespace ginibre

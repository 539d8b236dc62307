#pragma once

#include <string>
#include <vector>

#include "presshock/io.hpp"
#include "presshock/riemann.hpp"
#include "presshock/scheme.hpp"

namespace presshock {

struct CellIndex {
    int i = 0;
    int j = 0;
    bool operator==(const CellIndex&) const = default;
};

// Cells with rho >= kappa * rho_ref that are local maxima along x or y.
std::vector<CellIndex> extract_ridge(const GridField& f, double kappa, double rho_ref);

struct VacuumMask {
    std::vector<CellIndex> cells;
    double area_fraction = 0;
};

VacuumMask vacuum_mask(const GridField& f, double eps_vac);

struct CompareParams {
    double kappa = 3;
    double rho_max_initial = 1;
    double eps_vac = 0;  // absolute threshold
    double coverage_radius = 2;  // cells
    double boundary_margin = 2;  // cells
    double erosion = 2;  // cells
    double dilation = 2;  // cells
};

CompareParams compare_params_for(const RiemannData& d);

struct SegmentCoverage {
    std::string label;
    double length = 0;  // physical, inside the sampled window
    double coverage = 0;
};

struct CompareReport {
    double time = 0;
    double dx = 0;
    std::size_t ridge_cells = 0;
    bool infinite_distance = false;
    double ridge_mean_dist = 0;  // physical
    double ridge_max_dist = 0;
    double ridge_mean_dist_cells = 0;
    double ridge_max_dist_cells = 0;
    double coverage = 1;  // length-weighted over delta segments
    std::vector<SegmentCoverage> segments;
    bool has_vacuum_polygon = false;
    std::size_t vacuum_cells = 0;  // cells used for the mean
    double vacuum_mean_density = 0;
    double vacuum_area_fraction = 0;
    double vacuum_outside_fraction = 0;  // masked cells outside the dilated polygons
};

double point_polyline_distance(const Point2& p, const std::vector<Point2>& line);
bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly);

// Distances are NaN when the skeleton has no delta segment.
CompareReport compare(const GridField& f, const Skeleton& sk, const CompareParams& p);

Report to_report(const CompareReport& r);

} // namespace presshock

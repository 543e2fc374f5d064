#pragma once

#include <string>

#include "crlab/btkernel.hpp"
#include "crlab/graphapprox.hpp"
#include "crlab/hulls.hpp"
#include "crlab/moments.hpp"

namespace crlab {

/// Round-trippable float formatting (shortest form that parses back to the
/// identical double): re-reading and re-emitting an artifact is byte-stable.
std::string format_double(double v);

// CSV
std::string moment_report_csv(const MomentReport& report);     // header t,k,re,im,abs
MomentReport parse_moment_report_csv(const std::string& text);

std::string hull_cloud_csv(const HullCloud& cloud);  // point coords, stage, residual

std::string approx_fibers_csv(const ApproxReport& report);      // level, degree, residual rows
std::string approx_error_grid_csv(const ApproxReport& report);  // re, im, s, error heat-map rows

// JSON
std::string moment_report_json(const MomentReport& report);
std::string hull_cloud_json(const HullCloud& cloud);  // with provenance chains
std::string approx_report_json(const ApproxReport& report);
std::string moment_table_json(const GaussianMomentTable& table);
std::string polynomial_json(const HoloPolynomial& poly);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace crlab

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "presshock/riemann.hpp"
#include "presshock/scheme.hpp"

namespace presshock {

// %.17g; infinities as inf / -inf.
std::string format_number(double x);

void write_snapshot(std::ostream& os, const GridField& f);
GridField read_snapshot(std::istream& is);

void write_skeleton(std::ostream& os, const Skeleton& sk);
// Reads segments and vacuum polygons; side indices and diagnostics are not stored.
Skeleton read_skeleton(std::istream& is);

using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(std::ostream& os, const Report& r);

void write_trajectory(std::ostream& os, const std::vector<GrhState>& samples);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace presshock

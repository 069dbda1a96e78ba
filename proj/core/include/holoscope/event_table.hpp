#pragma once

#include "holoscope/lightpath.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace holo {

inline constexpr const char* kEventCsvHeader = "word,t_e,dt,phi_e,phi_r,pe0,pe1,pe2,pr0,pr1,pr2,freq_ratio";

// Fixed column order, 17 significant digits, '\n' line endings.
void write_events_csv(std::ostream& out, const std::vector<ReturnEvent>& events);
std::string events_to_csv(const std::vector<ReturnEvent>& events);

// Parse errors name the offending line. RelativeParams are not part of the
// table and come back zeroed.
std::vector<ReturnEvent> read_events_csv(std::istream& in);
std::vector<ReturnEvent> read_events_csv(const std::filesystem::path& path);

} // namespace holo

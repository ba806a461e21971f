#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

namespace fedsel::detail {

// 17 significant digits, '.' decimal point, independent of locale.
std::string format_double(double v);

std::ofstream open_output(const std::filesystem::path& path);

// "# provenance: <json>" line prepended to every CSV artifact.
void write_provenance(std::ostream& os, const std::string& config_json);

}  // namespace fedsel::detail

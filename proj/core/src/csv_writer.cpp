#include "csv_writer.hpp"

#include <charconv>
#include <cmath>

#include "fedsel/error.hpp"

namespace fedsel::detail {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void write_provenance(std::ostream& os, const std::string& config_json) {
  os << "# provenance: " << config_json << '\n';
}

}  // namespace fedsel::detail

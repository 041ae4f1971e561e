#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dhsic/kernel.hpp"

namespace dhsic::csv {

/// Whether the first row holds grid abscissae.
///   Auto: yes when it is all-numeric, strictly increasing and not the only row.
enum class HeaderMode { Auto, Yes, No };

HeaderMode parse_header_mode(std::string_view name);

/// One component per file: rows are observations, columns vector coordinates
/// or grid points. Comma separated, period decimal separator, no quoting.
ComponentData parse_component(std::string_view text, HeaderMode header = HeaderMode::Auto,
                              std::string_view source = "<memory>");

ComponentData read_component(const std::filesystem::path& path,
                             HeaderMode header = HeaderMode::Auto);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Writes the grid (if any) as a header row, then the observations, at full
/// round-trip precision.
void write_component(std::ostream& out, const ComponentData& data);
void write_component(const std::filesystem::path& path, const ComponentData& data);

}  // namespace dhsic::csv

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

struct ProfileSamples {
  std::vector<double> r;
  std::vector<double> value;
};

/// CSV with header `r,value`, one node per line, r strictly increasing.
/// Malformed content raises InputError carrying the line number.
ProfileSamples read_profile_csv(const std::filesystem::path& path);
ProfileSamples parse_profile_csv(std::string_view text);

/// Shortest round-trip decimal for every sample. Written to a temporary
/// sibling first and renamed into place.
void write_profile_csv(const std::filesystem::path& path, const RadialProfile& profile);
void write_csv_columns(const std::filesystem::path& path, std::string_view header,
                       std::span<const double> a, std::span<const double> b);

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Write text to path atomically (temporary file plus rename).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace choquard

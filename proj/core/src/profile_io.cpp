#include "choquard/profile_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InputError("cannot parse number '" + std::string(s) + "'", line);
  if (!std::isfinite(x)) throw InputError("non-finite value", line);
  return x;
}

}  // namespace

ProfileSamples parse_profile_csv(std::string_view text) {
  ProfileSamples out;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!header_seen) {
      if (line != "r,value") throw InputError("expected header 'r,value'", line_no);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw InputError("expected two comma-separated fields", line_no);
    const double r = parse_number(line.substr(0, comma), line_no);
    const double v = parse_number(line.substr(comma + 1), line_no);
    if (!(r >= 0.0)) throw InputError("radius must be nonnegative", line_no);
    if (!out.r.empty() && !(r > out.r.back()))
      throw InputError("radii must be strictly increasing", line_no);
    out.r.push_back(r);
    out.value.push_back(v);
  }
  if (!header_seen) throw InputError("empty profile file", 1);
  if (out.r.size() < 4) throw InputError("profile needs at least 4 samples", line_no);
  return out;
}

ProfileSamples read_profile_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open profile " + path.string(), 0);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_profile_csv(ss.str());
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InternalError("to_chars failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv_columns(const std::filesystem::path& path, std::string_view header,
                       std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("csv columns differ in length");
  std::string text(header);
  text += '\n';
  for (std::size_t i = 0; i < a.size(); ++i) {
    text += format_double(a[i]);
    text += ',';
    text += format_double(b[i]);
    text += '\n';
  }
  write_file_atomic(path, text);
}

void write_profile_csv(const std::filesystem::path& path, const RadialProfile& profile) {
  write_csv_columns(path, "r,value", profile.grid().nodes(), profile.values());
}

}  // namespace choquard

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bipnav {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Wrap to (-pi, pi]
double wrap_angle(double a);

// Shortest-path doubles round trip: 17 significant digits always recover the
// same bits on parse, which the on-disk formats rely on.
std::string fmt_double(double v);
std::string fmt_int(long long v);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::vector<std::string> split_ws(std::string_view line);
std::string trim(std::string_view s);

std::uint64_t fnv1a64(std::string_view data);

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Sorted list of regular files in `dir` whose names end with `suffix`.
std::vector<std::string> list_files(const std::string& dir, const std::string& suffix);

}  // namespace bipnav

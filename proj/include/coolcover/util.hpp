#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coolcover::util {

/// FNV-1a 64-bit hash; stable across platforms, used for cache keys and
/// input fingerprints.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value);

/// Fixed 17-significant-digit formatting ("%.17g"); "inf" for infinities.
std::string format_double(double value);

std::vector<std::string> split_csv_line(const std::string& line);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string json_escape(std::string_view text);

} // namespace coolcover::util

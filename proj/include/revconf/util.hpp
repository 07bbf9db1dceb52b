#ifndef REVCONF_UTIL_HPP
#define REVCONF_UTIL_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace revconf {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split_on(std::string_view s, char sep);
std::string join(std::span<const std::string> parts, std::string_view sep);

// FNV-1a 64-bit, used for input digests in the run manifest and for
// feature-spec fingerprints.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);
std::uint64_t fnv1a64_file(const std::string& path);
std::string fnv1a64_file_hex(const std::string& path);

// Bounded draw from a mt19937 stream without std::uniform_int_distribution,
// which is implementation-defined. Rejection sampling keeps shuffles
// bit-identical across standard libraries.
std::uint32_t bounded_uint32(std::mt19937& rng, std::uint32_t bound);

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = bounded_uint32(rng, static_cast<std::uint32_t>(i));
    std::swap(items[i - 1], items[j]);
  }
}

// Fixed numeric formatting for reports: coefficients at 4 decimals,
// p-values switch to scientific notation below 1e-4.
std::string format_fixed(double v, int decimals = 4);
std::string format_pvalue(double p);

std::string read_file(const std::string& path);  // throws on failure
void write_file(const std::string& path, std::string_view content);

}  // namespace revconf

#endif  // REVCONF_UTIL_HPP

#ifndef PSTAT_HASHING_HPP_
#define PSTAT_HASHING_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pstat {

using Sha256Digest = std::array<unsigned char, 32>;

Sha256Digest sha256(std::string_view data);
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::filesystem::path& path);

// First eight digest bytes, big endian.
std::uint64_t digest_prefix_u64(const Sha256Digest& digest);

// Per-stage seed derived from a master seed: a hash of (seed, stage name).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view stage);

}  // namespace pstat

#endif  // PSTAT_HASHING_HPP_

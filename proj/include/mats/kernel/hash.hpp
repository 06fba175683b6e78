#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace mats {

/// 64-bit FNV-1a. Stable across runs and platforms; used for configuration
/// digests and block identities.
class Fnv1a {
public:
    static constexpr std::uint64_t offset_basis = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t prime = 0x100000001b3ULL;

    Fnv1a& bytes(std::string_view data) noexcept {
        for (unsigned char ch : data) {
            state_ ^= ch;
            state_ *= prime;
        }
        return *this;
    }

    // Length-prefixed so that adjacent fields cannot run into each other.
    Fnv1a& field(std::string_view data) noexcept {
        u64(data.size());
        return bytes(data);
    }

    Fnv1a& u64(std::uint64_t v) noexcept {
        for (int i = 0; i < 8; ++i) {
            state_ ^= static_cast<unsigned char>(v >> (8 * i));
            state_ *= prime;
        }
        return *this;
    }

    std::uint64_t value() const noexcept { return state_; }

private:
    std::uint64_t state_ = offset_basis;
};

inline std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace mats

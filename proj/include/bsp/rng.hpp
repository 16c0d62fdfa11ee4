#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace bsp {

// Seedable, splittable random stream (xoshiro256++ core, ziggurat normals).
// Identical seed + identical call sequence gives identical output; children
// split off with distinct labels are independent streams. `path()` records
// the split lineage so reports can embed every seed that was used.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::string path = "root");

    RngStream split(std::string_view label) const;

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53 random bits.
    double uniform01();
    // Uniform on (0,1); safe under log().
    double uniform01_open();
    double uniform(double a, double b);
    // Standard normal.
    double normal();
    // Exponential with mean one.
    double exponential();
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }
    const std::string& path() const { return path_; }

private:
    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_ = 0;
    std::string path_;
};

}  // namespace bsp

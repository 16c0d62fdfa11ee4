#include "bsp/rng.hpp"

#include <cmath>

namespace bsp {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kZigR = 3.6541528853610088;
constexpr double kZigV = 0.00492867323399941;

// 256-strip ziggurat tables for the standard normal (Marsaglia/Doornik layout).
struct ZigTables {
    double x[257];
    double f[257];
    double ratio[256];
    ZigTables() {
        x[0] = kZigV / std::exp(-0.5 * kZigR * kZigR);
        x[1] = kZigR;
        x[256] = 0.0;
        for (int i = 2; i < 256; ++i) {
            const double prev = x[i - 1];
            x[i] = std::sqrt(-2.0 * std::log(kZigV / prev + std::exp(-0.5 * prev * prev)));
        }
        for (int i = 0; i <= 256; ++i) f[i] = std::exp(-0.5 * x[i] * x[i]);
        for (int i = 0; i < 256; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

const ZigTables& zig() {
    static const ZigTables t;
    return t;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string path) : seed_(seed), path_(std::move(path)) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
}

RngStream RngStream::split(std::string_view label) const {
    std::uint64_t h = 1469598103934665603ull;
    for (const char ch : label) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    std::uint64_t sm = seed_ ^ h;
    splitmix64(sm);
    const std::uint64_t child = splitmix64(sm);
    return RngStream(child, path_ + "/" + std::string(label));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

double RngStream::uniform01_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double RngStream::normal() {
    const ZigTables& z = zig();
    for (;;) {
        const std::uint64_t bits = next_u64();
        const int i = static_cast<int>(bits & 0xFF);
        double u = static_cast<double>(bits >> 11) * 0x1p-53;
        u = 2.0 * u - 1.0;
        if (std::fabs(u) < z.ratio[i]) return u * z.x[i];
        if (i == 0) {
            // Tail beyond R: Marsaglia rejection.
            double tx, ty;
            do {
                tx = -std::log(uniform01_open()) / kZigR;
                ty = -std::log(uniform01_open());
            } while (ty + ty < tx * tx);
            return u < 0 ? -(kZigR + tx) : kZigR + tx;
        }
        const double cand = u * z.x[i];
        if (z.f[i + 1] + uniform01() * (z.f[i] - z.f[i + 1]) < std::exp(-0.5 * cand * cand)) {
            return cand;
        }
    }
}

double RngStream::exponential() { return -std::log(1.0 - uniform01()); }

std::uint64_t RngStream::below(std::uint64_t n) {
    // Rejection to avoid modulo bias.
    const std::uint64_t limit = n * (~0ull / n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

}  // namespace bsp

#pragma once

// Deterministic random streams (PCG64 XSL-RR 128/64) with hierarchical
// substream derivation. All distributions are built from raw 64-bit draws so
// output is bit-identical across platforms and standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace robustmin {

class RngStream {
public:
    using u64 = std::uint64_t;
    using u128 = unsigned __int128;

    explicit RngStream(u64 seed) : id_(seed) { reseed(); }

    // Stable child stream keyed by (this stream's seed identity, label, index).
    // Independent of how many draws were consumed from the parent.
    RngStream substream(std::string_view label, u64 index = 0) const {
        u64 h = mix(id_ ^ fnv1a(label));
        h = mix(h ^ (index + 0x9e3779b97f4a7c15ull));
        return RngStream(h);
    }

    u64 seed_id() const { return id_; }

    u64 next_u64() {
        u128 old = state_;
        state_ = old * mult() + inc_;
        u64 xored = static_cast<u64>(old >> 64) ^ static_cast<u64>(old);
        unsigned rot = static_cast<unsigned>(old >> 122);
        return (xored >> rot) | (xored << ((64u - rot) & 63u));
    }

    // [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // (0, 1] — safe as a log() argument
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // unbiased-enough index draw (Lemire reduction, bias < n * 2^-64)
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>((u128(next_u64()) * u128(n)) >> 64);
    }

    // standard normal, Box-Muller with one cached spare
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        double a = 2.0 * std::numbers::pi * uniform01();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    static u64 fnv1a(std::string_view s) {
        u64 h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

    static u64 mix(u64 x) {  // splitmix64 finalizer
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

private:
    static constexpr u128 mult() {
        return (u128(0x2360ed051fc65da4ull) << 64) | 0x4385df649fccf645ull;
    }

    void reseed() {
        u64 s = id_;
        auto draw = [&s] {
            s += 0x9e3779b97f4a7c15ull;
            return mix(s);
        };
        u64 st_hi = draw(), st_lo = draw(), sq_hi = draw(), sq_lo = draw();
        inc_ = (((u128(sq_hi) << 64) | sq_lo) << 1) | 1u;
        state_ = inc_ + ((u128(st_hi) << 64) | st_lo);
        state_ = state_ * mult() + inc_;
    }

    u64 id_;
    u128 state_ = 0;
    u128 inc_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace robustmin

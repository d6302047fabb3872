#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace oscint {

// Shortest round-trip decimal representation of a binary64 value.
inline std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Write-to-temp + rename, so readers never observe a partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

// Deterministic uniform generator; avoids std::uniform_real_distribution so
// streams are identical across standard-library implementations.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    std::uint64_t integer(std::uint64_t n) { return gen() % n; } // small n only
};

// Geometric grid with `count` points from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, int count) {
    std::vector<double> g;
    g.reserve(count);
    if (count == 1) {
        g.push_back(lo);
        return g;
    }
    double lr = std::log(lo), dr = (std::log(hi) - lr) / (count - 1);
    for (int i = 0; i < count; ++i) g.push_back(std::exp(lr + i * dr));
    g.back() = hi;
    return g;
}

} // namespace oscint

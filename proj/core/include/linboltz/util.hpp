#pragma once

#include <cstdint>
#include <cstring>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>
#include <functional>

namespace linboltz {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a over raw bytes; used for content hashes of grids and kernel caches.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t hash_doubles(std::span<const double> xs, std::uint64_t seed = 0xcbf29ce484222325ull) {
    return fnv1a(xs.data(), xs.size() * sizeof(double), seed);
}

std::string hex64(std::uint64_t h);

// Deterministic RNG. std::mt19937_64 output is pinned by the standard; the
// uniform/normal transforms below are hand-rolled so streams are identical
// across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Box-Muller with a cached spare.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t integer() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Chunked parallel-for. Work is split into chunks by index range only, so
// results that write disjoint outputs are identical for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

// Deterministic parallel reduction: the index range is split into a fixed
// number of chunks (independent of the worker count), each chunk reduced
// serially, and the per-chunk partials summed in chunk order.
double parallel_reduce(std::size_t n, int threads, const std::function<double(std::size_t, std::size_t)>& chunk_sum);

int resolve_threads(int requested);

}  // namespace linboltz

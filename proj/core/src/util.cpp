#include "linboltz/util.hpp"

#include <algorithm>
#include <cmath>

namespace linboltz {

std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[h & 0xf];
        h >>= 4;
    }
    return s;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min<unsigned>(hw, 16));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    const int nt = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
    if (nt <= 1 || n < 2) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t b = std::min<std::size_t>(t * chunk, n);
        const std::size_t e = std::min<std::size_t>(b + chunk, n);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& th : pool) th.join();
}

double parallel_reduce(std::size_t n, int threads, const std::function<double(std::size_t, std::size_t)>& chunk_sum) {
    constexpr std::size_t kChunks = 64;  // fixed, so the result is thread-count independent
    const std::size_t nchunks = std::min<std::size_t>(kChunks, std::max<std::size_t>(n, 1));
    std::vector<double> partial(nchunks, 0.0);
    const std::size_t per = (n + nchunks - 1) / nchunks;
    parallel_for(nchunks, threads, [&](std::size_t cb, std::size_t ce) {
        for (std::size_t c = cb; c < ce; ++c) {
            const std::size_t b = std::min(c * per, n);
            const std::size_t e = std::min(b + per, n);
            partial[c] = (b < e) ? chunk_sum(b, e) : 0.0;
        }
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace linboltz

#include "feller/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace feller {

std::size_t worker_count() {
    static const std::size_t cached = [] {
        std::size_t count = std::max<std::size_t>(1, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("FELLER_THREADS")) {
            try {
                const long cap = std::stol(env);
                if (cap >= 1) count = std::min(count, static_cast<std::size_t>(cap));
            } catch (...) {
                // Unparseable cap: keep the hardware count.
            }
        }
        return count;
    }();
    return cached;
}

}  // namespace feller

#include "factforge/util.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace factforge {

std::vector<std::string> split_tokens(std::string_view joined) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < joined.size()) {
        while (i < joined.size() && joined[i] == ' ') ++i;
        std::size_t j = i;
        while (j < joined.size() && joined[j] != ' ') ++j;
        if (j > i) out.emplace_back(joined.substr(i, j - i));
        i = j;
    }
    return out;
}

void parallel_for_index(std::size_t n, unsigned jobs,
                        const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::size_t count = std::min<std::size_t>(jobs, n);
    std::vector<std::thread> workers;
    workers.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        workers.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace factforge

#include "tsf/diagnostics.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace tsf {

namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot() {
    static WarningHandler h;
    return h;
}

constexpr std::size_t kMinChunk = 64;

} // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex());
    auto previous = std::move(handler_slot());
    handler_slot() = std::move(handler);
    return previous;
}

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex());
    if (handler_slot()) {
        handler_slot()(message);
    } else {
        std::cerr << "tsf: warning: " << message << '\n';
    }
}

std::size_t worker_count() {
    std::size_t requested = 0;
    if (const char* env = std::getenv("TSF_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) requested = static_cast<std::size_t>(v);
    }
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t workers = std::min(worker_count(), (count + kMinChunk - 1) / kMinChunk);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&body, &errors](std::size_t slot, std::size_t b, std::size_t e) {
        try {
            body(b, e);
        } catch (...) {
            errors[slot] = std::current_exception();
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(count, b + chunk);
            if (b < e) pool.emplace_back(run, w, b, e);
        }
        run(0, 0, std::min(count, chunk));
    }
    // Lowest chunk wins so the reported failure matches a serial sweep.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace tsf

#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace tsf {

using WarningHandler = std::function<void(const std::string&)>;

// Warnings go to stderr unless a handler is installed. Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

/// Worker cap from TSF_THREADS (unset or 0 means hardware concurrency). Read on every call.
std::size_t worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunks never overlap, so
/// per-index writes are race-free; reductions belong to the caller, in index order.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace tsf

#pragma once

#include <cstddef>
#include <functional>

namespace v2 {

/// 0 means one worker per hardware thread.
int resolve_jobs(int jobs);

/// Runs body(i) for every i in [0, count) on up to `jobs` workers. Indices
/// are claimed dynamically, so bodies must write only to slots they own.
/// The first exception thrown by any body is rethrown on the caller.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace v2

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace tightembed {

/// Worker bound: TIGHT_EMBED_THREADS when set (clamped to >= 1), otherwise
/// the hardware concurrency.
int worker_count();

/// Runs fn over disjoint [begin, end) chunks of [0, n), possibly on several
/// threads. Callers keep determinism by writing only to disjoint slots.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace tightembed

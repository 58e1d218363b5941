// Copyright 2026 The OLA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OLA_PARALLEL_H_
#define OLA_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace ola {

// Worker count: OLA_THREADS when set to a positive integer, otherwise the
// hardware concurrency.
int ThreadCount();

// Runs body(i) for i in [0, count) on up to ThreadCount() threads. Callers
// that reduce must write per-index results and combine them in index order,
// which keeps results independent of the thread count. The exception from
// the lowest failing index is rethrown after all workers finish.
void ParallelFor(size_t count, const std::function<void(size_t)>& body);

// Samples per work item for dataset loops.
inline constexpr size_t kSampleChunk = 64;

}  // namespace ola

#endif  // OLA_PARALLEL_H_

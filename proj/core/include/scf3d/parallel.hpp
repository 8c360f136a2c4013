// SPDX-License-Identifier: Apache-2.0
//
// scf3d: spatial correlation and mutual information of 3D MIMO channels
// Copyright (C) 2026 The scf3d authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SCF3D_PARALLEL_HPP
#define SCF3D_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace scf3d
{
    // Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
    // Callers write results into slot i, so reductions stay in index order. The first
    // exception thrown by any task is rethrown after all workers stop.
    void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &fn);

    unsigned resolve_threads(unsigned requested);
}

#endif

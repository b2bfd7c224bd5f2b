// Copyright 2026 The embeval Authors.
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

#ifndef EMBEVAL_PARALLEL_H_
#define EMBEVAL_PARALLEL_H_

#ifdef _OPENMP
#include <omp.h>
#endif

namespace embeval {

// Upper bound on worker threads for every parallel kernel. Zero or negative
// restores the OpenMP default.
void set_max_threads(int threads);
int max_threads();

}  // namespace embeval

#endif  // EMBEVAL_PARALLEL_H_

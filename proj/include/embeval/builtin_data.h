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

#ifndef EMBEVAL_BUILTIN_DATA_H_
#define EMBEVAL_BUILTIN_DATA_H_

#include <string_view>
#include <vector>

namespace embeval::builtin {

struct DataFile {
  std::string_view name;
  std::string_view content;
};

// Contents of data/abbrev/<lang>.txt, compiled in.
const std::vector<DataFile> &abbreviation_tables();

// Contents of data/templates/<lang>.txt, compiled in.
const std::vector<DataFile> &template_files();

}  // namespace embeval::builtin

#endif  // EMBEVAL_BUILTIN_DATA_H_

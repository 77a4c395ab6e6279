// Copyright 2026 The objseq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OBJSEQ_JSON_IO_H_
#define OBJSEQ_JSON_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace objseq {

// Parse errors are reported as ValidationError naming the file (and line
// for JSONL).
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
std::vector<nlohmann::json> ReadJsonl(const std::filesystem::path& path);

// Output is deterministic: object keys sorted, two-space indent, trailing newline.
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& value);
void WriteJsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace objseq

#endif  // OBJSEQ_JSON_IO_H_

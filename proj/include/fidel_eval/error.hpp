// Copyright (c) 2026 The fidel-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDEL_EVAL_ERROR_HPP_
#define FIDEL_EVAL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fidel {

enum class ErrorCode {
  kIo,
  kParse,
  kEncoding,
  kDuplicateId,
  kEmptyReference,
  kEmptyCorpus,
  kIdMismatch,
  kRefMismatch,
  kTableFormat,
  kInvalidArgument,
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kEncoding: return "encoding";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kEmptyReference: return "empty_reference";
    case ErrorCode::kEmptyCorpus: return "empty_corpus";
    case ErrorCode::kIdMismatch: return "id_mismatch";
    case ErrorCode::kRefMismatch: return "ref_mismatch";
    case ErrorCode::kTableFormat: return "table_format";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

// Every failure raised by the library. `line` is 1-based (0 when the error is
// not tied to an input line) and `id` names the offending pair, if any.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0,
        std::string id = {})
      : std::runtime_error(message),
        code_(code),
        line_(line),
        id_(std::move(id)) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& id() const noexcept { return id_; }

 private:
  ErrorCode code_;
  std::size_t line_;
  std::string id_;
};

}  // namespace fidel

#endif  // FIDEL_EVAL_ERROR_HPP_

/*
 * Copyright 2026 The ctrkeys Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef CTRKEYS_ERRORS_H_
#define CTRKEYS_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctrkeys {

enum class ErrorCode {
  kMalformedRecord,
  kSchemaMismatch,
  kDuplicateId,
  kIoFailure,
  kUnknownFeature,
  kInvalidConfig,
  kInvalidArgument,
  kEmptyData,
  kDimensionMismatch,
  kDegenerateSplit,
  kOutOfOrderUpdate,
  kEmptyStream,
  kDivergedTraining,
  kEmptyInput,
  kDegenerateBaseline,
  kInsufficientData,
  kMissingKeys,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// lets callers (and the CLI exit-code mapping) branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctrkeys

#endif  // CTRKEYS_ERRORS_H_

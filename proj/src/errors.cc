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
#include "ctrkeys/errors.h"

namespace ctrkeys {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord:
      return "MalformedRecord";
    case ErrorCode::kSchemaMismatch:
      return "SchemaMismatch";
    case ErrorCode::kDuplicateId:
      return "DuplicateId";
    case ErrorCode::kIoFailure:
      return "IoFailure";
    case ErrorCode::kUnknownFeature:
      return "UnknownFeature";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kEmptyData:
      return "EmptyData";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kDegenerateSplit:
      return "DegenerateSplit";
    case ErrorCode::kOutOfOrderUpdate:
      return "OutOfOrderUpdate";
    case ErrorCode::kEmptyStream:
      return "EmptyStream";
    case ErrorCode::kDivergedTraining:
      return "DivergedTraining";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kDegenerateBaseline:
      return "DegenerateBaseline";
    case ErrorCode::kInsufficientData:
      return "InsufficientData";
    case ErrorCode::kMissingKeys:
      return "MissingKeys";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace ctrkeys

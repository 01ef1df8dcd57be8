// Copyright 2026 The Oraclearn Authors.
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

#ifndef ORACLEARN_ERROR_H_
#define ORACLEARN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace oraclearn {

enum class ErrorCode {
  kInvalidArgument,
  kDomainTooLarge,
  kUnsupported,
  kConflictingLabels,
  kEmptySample,
  kIllegalQuery,
  kBudgetExceeded,
  kQueryBudgetExceeded,
  kNotRealizableStream,
  kContractViolation,
  kInconsistentOracle,
  kNoUnrealizableLabeling,
  kAmbiguousCenter,
  kFutureCellTouched,
  kInfeasible,
  kOutOfRange,
  kEmptyBatch,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception; `code()` lets callers (the
// CLI in particular) map failures to exit statuses without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oraclearn

#endif  // ORACLEARN_ERROR_H_

// Copyright 2026 The dpmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace dpmech {

// Process exit codes used by the CLI. Library code throws typed errors;
// the harness maps them onto these codes.
enum class ExitCode : int {
  kOk = 0,
  kParse = 2,
  kNonRegularPrior = 3,
  kNumericalFailure = 4,
  kUsage = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

#define DPMECH_DEFINE_ERROR(NAME, CODE)                      \
  class NAME : public Error {                                \
   public:                                                   \
    explicit NAME(const std::string& what)                   \
        : Error(CODE, std::string(#NAME) + ": " + what) {}   \
  }

DPMECH_DEFINE_ERROR(OutOfSupportError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(DegenerateDensityError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(LengthMismatchError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(NonPositiveEpsilonError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(EmptyInputError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(AllZeroError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(AllZeroWeightsError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(NonRegularPriorError, ExitCode::kNonRegularPrior);
DPMECH_DEFINE_ERROR(NumericalFailureError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(DimensionTooLargeError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(InsufficientTrialsError, ExitCode::kNumericalFailure);
DPMECH_DEFINE_ERROR(ParseError, ExitCode::kParse);

#undef DPMECH_DEFINE_ERROR

}  // namespace dpmech

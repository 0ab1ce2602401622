// Copyright 2026 The qpatch Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception hierarchy shared by every qpatch module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qpatch {

/// Broad failure category; the CLI maps each one to a distinct exit code.
enum class ErrorKind {
    InvalidInput,
    Contract,
    Configuration,
    Format,
    Data,
    DegenerateInput,
    Numerical,
    Validation,
};

[[nodiscard]] const char *to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

#define QPATCH_DEFINE_ERROR(Name, Kind)                                        \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string &message)                              \
            : Error(ErrorKind::Kind, message) {}                               \
    };

QPATCH_DEFINE_ERROR(InvalidInputError, InvalidInput)
QPATCH_DEFINE_ERROR(ContractError, Contract)
QPATCH_DEFINE_ERROR(ConfigurationError, Configuration)
QPATCH_DEFINE_ERROR(FormatError, Format)
QPATCH_DEFINE_ERROR(DataError, Data)
QPATCH_DEFINE_ERROR(DegenerateInputError, DegenerateInput)
QPATCH_DEFINE_ERROR(NumericalError, Numerical)
QPATCH_DEFINE_ERROR(ValidationError, Validation)

#undef QPATCH_DEFINE_ERROR

} // namespace qpatch

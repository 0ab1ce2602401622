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
#include "qpatch/error.hpp"

namespace qpatch {

const char *to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidInput:
        return "invalid input";
    case ErrorKind::Contract:
        return "contract violation";
    case ErrorKind::Configuration:
        return "configuration error";
    case ErrorKind::Format:
        return "format error";
    case ErrorKind::Data:
        return "data error";
    case ErrorKind::DegenerateInput:
        return "degenerate input";
    case ErrorKind::Numerical:
        return "numerical error";
    case ErrorKind::Validation:
        return "validation error";
    }
    return "error";
}

} // namespace qpatch

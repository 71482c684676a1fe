// Copyright 2026 The cliffpatch Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cliffpatch {

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised for malformed specs, configs and axes.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configured size or budget cap would be exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Surrogate build refused by the budget guard. Carries the log-domain op-count estimate.
struct BudgetExceeded : ResourceError {
    double predicted_indices;
    double log_op_bound;
    BudgetExceeded(const std::string &msg, double predicted, double log_bound)
        : ResourceError(msg), predicted_indices(predicted), log_op_bound(log_bound) {
    }
};

/// Internal self-check failed. Indicates a bug.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cliffpatch

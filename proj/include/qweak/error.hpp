// Copyright 2026 The qweak Authors
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
#pragma once

#include <stdexcept>
#include <string>

namespace qweak {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid setup: out-of-range qubit counts, bad layouts, unknown keys.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A caller broke a precondition (length mismatch, bad derivative order).
class ContractError : public Error {
  public:
    using Error::Error;
};

/// Input outside the encodable range of a feature map.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Training stopped on a non-finite loss or gradient.
class TrainingAbort : public Error {
  public:
    TrainingAbort(std::string component, long epoch, const std::string &what)
        : Error(what), component_(std::move(component)), epoch_(epoch) {}

    [[nodiscard]] const std::string &component() const noexcept {
        return component_;
    }
    [[nodiscard]] long epoch() const noexcept { return epoch_; }

  private:
    std::string component_;
    long epoch_;
};

template <typename E>
inline void require(bool condition, const std::string &message) {
    if (!condition) {
        throw E(message);
    }
}

} // namespace qweak

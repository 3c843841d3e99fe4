// Copyright 2026 The qcnn Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcnn {

/// Invalid shape, count or configuration value.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed on-disk data. Carries the byte offset at which decoding failed.
class FormatError : public std::runtime_error {
  public:
    FormatError(const std::string &what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte offset " +
                             std::to_string(offset) + ")"),
          detail_(what), offset_(offset) {}

    [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }
    /// Message without the offset suffix.
    [[nodiscard]] const std::string &detail() const noexcept { return detail_; }

  private:
    std::string detail_;
    std::uint64_t offset_;
};

/// NaN/Inf where a finite value is required.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Image could not be decoded.
class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// API used out of order (e.g. backward without a forward cache).
class UsageError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Checkpoint JSON failed validation. `pointer()` is the JSON pointer of the
/// first offending field.
class CheckpointError : public std::runtime_error {
  public:
    CheckpointError(const std::string &pointer, const std::string &what)
        : std::runtime_error(pointer + ": " + what), pointer_(pointer) {}

    [[nodiscard]] const std::string &pointer() const noexcept {
        return pointer_;
    }

  private:
    std::string pointer_;
};

} // namespace qcnn

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

/**
 * @file selftest.hpp
 * Embedded oracle suite behind `qcnn selftest`.
 */

#pragma once

#include <string>
#include <vector>

namespace qcnn::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Fault injection for negative controls.
struct Faults {
    /// Kernels receive gates with one wrong matrix entry.
    bool gate_typo = false;
};

std::vector<CheckResult> run(const Faults &faults = {});

} // namespace qcnn::selftest

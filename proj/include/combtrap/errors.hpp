// Copyright 2026 The combtrap Authors
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
#include <vector>

namespace combtrap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Raman coupling requested while q is not integer-classified.
class NotOnResonance : public Error {
public:
    using Error::Error;
};

/// The truncated Fock basis cannot hold the state to the required accuracy.
class CutoffTooSmall : public Error {
public:
    CutoffTooSmall(const std::string& what, double leakage)
        : Error(what), leakage_(leakage) {}
    double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

class InvalidRatio : public Error {
public:
    using Error::Error;
};

class InsufficientScan : public Error {
public:
    using Error::Error;
};

/// Configuration validation failure. Carries every problem found, each
/// prefixed with the JSON path of the offending field.
class SchemaError : public Error {
public:
    explicit SchemaError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Non-fatal diagnostics collected during a computation and surfaced in the
/// run manifest.
struct Warnings {
    std::vector<std::string> messages;
    void add(std::string msg) { messages.push_back(std::move(msg)); }
};

inline void warn(Warnings* sink, std::string msg)
{
    if (sink)
        sink->add(std::move(msg));
}

}  // namespace combtrap

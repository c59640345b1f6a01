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

// Executes a validated configuration and serializes the result.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "combtrap/config.hpp"
#include "combtrap/errors.hpp"

namespace combtrap {

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Everything a run computes. Independent of the worker count.
struct RunResult {
    Table table;
    nlohmann::json report = nlohmann::json::object();
    double max_leakage = 0.0;
    Warnings warnings;
};

struct RunOptions {
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    int threads = 1;
    bool force_exact = false;
};

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::string timestamp;  ///< UTC, ISO 8601
    std::string task;
    std::string output_path;
    std::string status = "ok";  ///< "ok" or "failed"
    std::string error;
    double max_leakage = 0.0;
    std::vector<std::string> warnings;
    double wall_time_s = 0.0;
    nlohmann::json report = nlohmann::json::object();  ///< task summary, also in JSON output

    nlohmann::json to_json() const;
};

/// Computes without touching the filesystem.
RunResult execute(const ExperimentConfig& config, const RunOptions& options = {});

/// Computes, writes the output file and `<output>.manifest.json`. On
/// CutoffTooSmall the partial manifest is written before rethrowing.
RunManifest run(const ExperimentConfig& config, const RunOptions& options = {});

std::string to_csv(const Table& table);
/// Rows, report and the reproducible part of the manifest (no timestamp or
/// wall time, so identical configs give identical bytes).
std::string to_json_document(const Table& table, const RunResult& result, const std::string& config_hash);

/// 64-bit FNV-1a of the canonical (key-sorted, compact) configuration.
std::string config_hash(const ExperimentConfig& config);

/// Shortest round-trip decimal form, '.' separator regardless of locale.
std::string format_double(double value);

std::string manifest_path(const std::string& output_path);

}  // namespace combtrap

// SPDX-License-Identifier: Apache-2.0
//
// crossfield - spherical-wave channel synthesis and cross-field path loss
// modelling for uniform planar arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CROSSFIELD_COMMANDS_HPP
#define CROSSFIELD_COMMANDS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crossfield/io.hpp"

namespace crossfield::cli
{
    // Table-style measurement presets: 16x16 / 32x32 / 64x64 elements at
    // 0.5 mm spacing, 0.86 m boresight distance, 260-320 GHz x 1001 points.
    struct case_preset
    {
        std::size_t rows;
        std::size_t cols;
        double spacing_m;
        double d0_m;
    };

    case_preset preset_for_case(int case_number);

    struct synth_command
    {
        std::size_t rows = 16;
        std::size_t cols = 16;
        double spacing_m = 5e-4;
        double d0_m = 0.86;
        double theta_rad = 0.0;
        double f_start_hz = 260e9;
        double f_stop_hz = 320e9;
        std::size_t n_points = 1001;
        double pattern_qx = default_pattern_qx;
        double pattern_qz = default_pattern_qz;
        std::optional<double> noise_snr_db;
        double jitter_sigma_m = 0.0;
        double direct_excess_loss_db = 0.0;
        std::vector<std::array<double, 4>> specular; // x_m, y_m, z_m, excess_loss_db
        std::uint64_t seed = 0;
        unsigned threads = 0;
        bool gzip = false;
        std::filesystem::path out_dir = ".";
        std::string command_line;
    };

    struct extract_command
    {
        std::filesystem::path in_dir = ".";
        std::filesystem::path out_dir; // empty = in_dir
        window_kind window = window_kind::rectangular;
        double noise_floor_db = 30.0;
        unsigned threads = 0;
        std::string command_line;
    };

    struct fit_command
    {
        std::filesystem::path in_dir = ".";
        std::filesystem::path out_dir; // empty = in_dir
        std::size_t max_iterations = 2000;
        double tolerance = 1e-10;
        std::size_t restarts = 8;
        std::uint64_t seed = 0;
        std::string command_line;
    };

    struct report_command
    {
        std::filesystem::path in_dir = ".";
        std::filesystem::path fit_json; // empty = no model surface
        std::filesystem::path out_dir;  // empty = in_dir / "report"
        double boundary_band = 0.15;
        std::string command_line;
    };

    struct rayleigh_command
    {
        std::size_t rows = 16;
        std::size_t cols = 16;
        double spacing_m = 5e-4;
        double d0_m = 0.86;
        double theta_rad = 0.0;
        double frequency_hz = 290e9;
        double boundary_band = 0.15;
        std::filesystem::path json_out; // empty = stdout only
    };

    // Each command validates its configuration, performs the pipeline stage
    // and writes its artifacts atomically. Domain failures throw
    // no_path_found / degenerate_grid; configuration and file problems throw
    // std::invalid_argument / io_error. Returns 0.
    int run_synth(const synth_command &cmd);
    int run_extract(const extract_command &cmd);
    int run_fit(const fit_command &cmd);
    int run_report(const report_command &cmd);
    int run_rayleigh(const rayleigh_command &cmd);

    // Shared by extract/fit/report: locate `name` or `name.gz` under dir.
    std::filesystem::path find_artifact(const std::filesystem::path &dir, const std::string &name);

} // namespace crossfield::cli

#endif

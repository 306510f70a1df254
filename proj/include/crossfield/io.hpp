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

#ifndef CROSSFIELD_IO_HPP
#define CROSSFIELD_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "crossfield/fitting.hpp"
#include "crossfield/models.hpp"
#include "crossfield/propagation.hpp"
#include "crossfield/spectral.hpp"

namespace crossfield
{
    struct provenance
    {
        std::string command;
        std::uint64_t seed = 0;
        std::string timestamp; // ISO 8601 UTC
    };

    // Run manifest accompanying every CSV artifact. The lattice recorded here
    // is the nominal one; CSV bodies must match its dimensions.
    struct manifest
    {
        std::string schema_version = "1";
        std::size_t rows = 0;
        std::size_t cols = 0;
        double spacing_m = 0.0;
        double d0_m = 0.0;
        double theta_rad = 0.0;
        double f_start_hz = 0.0;
        double f_stop_hz = 0.0;
        std::size_t n_points = 0;
        provenance prov;
        std::optional<rayleigh_assessment> rayleigh; // written by synth

        scenario_geometry scenario() const;
        sweep_plan sweep() const;
    };

    manifest make_manifest(const scenario_geometry &scenario, const sweep_plan &sweep,
                           provenance prov);

    std::string iso_timestamp_utc();

    // All writers are atomic: content goes to a sibling temp file which is
    // renamed over the target. Paths ending in ".gz" are written and read
    // gzip-compressed; reads of plain files are transparent either way.
    void write_text_file(const std::filesystem::path &path, const std::string &content);
    std::string read_text_file(const std::filesystem::path &path);

    void write_manifest(const std::filesystem::path &path, const manifest &m);
    manifest read_manifest(const std::filesystem::path &path);

    // CTF body: element_index,freq_hz,re,im - element-major, frequency ascending.
    void write_ctf_csv(const std::filesystem::path &path, const ctf_grid &grid);
    ctf_grid read_ctf_csv(const std::filesystem::path &path, const manifest &m);

    // Observation body: element_row,element_col,dx_m,dz_m,delay_s,distance_m,
    // gain_db,phase_rad - scan order. Offsets are read back from the file so
    // externally measured, slightly off-lattice grids ingest cleanly.
    void write_observations_csv(const std::filesystem::path &path, const observation_grid &grid);
    observation_grid read_observations_csv(const std::filesystem::path &path, const manifest &m);

    // Observation schema with gain_db replaced by residual_db.
    void write_residuals_csv(const std::filesystem::path &path, const observation_grid &grid,
                             const std::vector<double> &residual_db);

    struct fit_report_file
    {
        cross_field_params params;
        cross_field_params canonical_params;
        double wavelength_m = 0.0;
        double d0_m = 0.0;
        double mse = 0.0;
        std::size_t iterations = 0;
        bool converged = false;
        bool saturated = false;
    };

    void write_fit_report_json(const std::filesystem::path &path, const fit_report_file &report);
    fit_report_file read_fit_report_json(const std::filesystem::path &path);

    struct rayleigh_file
    {
        double wavelength_m = 0.0;
        double aperture_m = 0.0;
        double d0_m = 0.0;
        double boundary_band = 0.0;
        rayleigh_assessment assessment;
    };

    void write_rayleigh_json(const std::filesystem::path &path, const rayleigh_file &r);

} // namespace crossfield

#endif

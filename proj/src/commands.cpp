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

#include "crossfield/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "crossfield/common.hpp"
#include "crossfield/fitting.hpp"
#include "crossfield/models.hpp"

namespace crossfield::cli
{
    using nlohmann::json;

    case_preset preset_for_case(int case_number)
    {
        switch (case_number)
        {
        case 1:
            return {16, 16, 5e-4, 0.86};
        case 2:
            return {32, 32, 5e-4, 0.86};
        case 3:
            return {64, 64, 5e-4, 0.86};
        default:
            throw std::invalid_argument("case must be 1, 2 or 3");
        }
    }

    std::filesystem::path find_artifact(const std::filesystem::path &dir, const std::string &name)
    {
        const std::filesystem::path plain = dir / name;
        if (std::filesystem::exists(plain))
            return plain;
        const std::filesystem::path gz = dir / (name + ".gz");
        if (std::filesystem::exists(gz))
            return gz;
        throw io_error("cannot find " + plain.string() + " (or .gz)");
    }

    namespace
    {
        provenance make_provenance(const std::string &command_line, std::uint64_t seed)
        {
            provenance p;
            p.command = command_line;
            p.seed = seed;
            p.timestamp = iso_timestamp_utc();
            return p;
        }

        std::size_t center_index(const upa_geometry &upa)
        {
            return upa.index_of(upa.rows / 2, upa.cols / 2);
        }

        manifest load_observation_manifest(const std::filesystem::path &dir)
        {
            const std::filesystem::path dedicated = dir / "observations_manifest.json";
            if (std::filesystem::exists(dedicated))
                return read_manifest(dedicated);
            return read_manifest(dir / "manifest.json");
        }
    } // namespace

    int run_synth(const synth_command &cmd)
    {
        const scenario_geometry nominal =
            make_scenario(build_upa(cmd.rows, cmd.cols, cmd.spacing_m), cmd.d0_m, cmd.theta_rad);
        const sweep_plan sweep = make_sweep(cmd.f_start_hz, cmd.f_stop_hz, cmd.n_points);

        scenario_geometry synth_scenario = nominal;
        if (cmd.jitter_sigma_m > 0.0)
            synth_scenario.upa = apply_position_jitter(nominal.upa, cmd.jitter_sigma_m, cmd.seed);

        std::vector<synth_path> paths;
        paths.push_back(direct_path(cmd.direct_excess_loss_db));
        for (const auto &s : cmd.specular)
            paths.push_back(specular_path({s[0], s[1], s[2]}, s[3]));

        synth_options options;
        options.pattern = {cmd.pattern_qx, cmd.pattern_qz};
        options.noise_snr_db = cmd.noise_snr_db;
        options.seed = cmd.seed;
        options.threads = cmd.threads;

        const ctf_grid grid = synth_ctf(synth_scenario, sweep, paths, options);

        manifest m = make_manifest(nominal, sweep, make_provenance(cmd.command_line, cmd.seed));
        m.rayleigh = classify_region(nominal, sweep.center_wavelength());

        const std::filesystem::path ctf_path = cmd.out_dir / (cmd.gzip ? "ctf.csv.gz" : "ctf.csv");
        write_manifest(cmd.out_dir / "manifest.json", m);
        write_ctf_csv(ctf_path, grid);

        std::printf("synth: %zux%zu elements, %zu sweep points, region %s\n", cmd.rows, cmd.cols,
                    cmd.n_points, to_string(m.rayleigh->region).c_str());
        std::printf("synth: wrote %s\n", ctf_path.string().c_str());
        return 0;
    }

    int run_extract(const extract_command &cmd)
    {
        const std::filesystem::path out_dir = cmd.out_dir.empty() ? cmd.in_dir : cmd.out_dir;
        const manifest m = read_manifest(cmd.in_dir / "manifest.json");
        const ctf_grid ctf = read_ctf_csv(find_artifact(cmd.in_dir, "ctf.csv"), m);

        const cir_grid cir = ctf_to_cir(ctf, cmd.window, cmd.threads);
        extract_options options;
        options.noise_floor_db = cmd.noise_floor_db;
        options.threads = cmd.threads;
        const observation_grid obs = extract_dominant_path(cir, ctf, options);

        double min_gain = obs.observations.front().gain_db;
        double max_gain = min_gain;
        for (const path_observation &o : obs.observations)
        {
            min_gain = std::min(min_gain, o.gain_db);
            max_gain = std::max(max_gain, o.gain_db);
        }
        const path_observation &center = obs.observations[center_index(obs.geometry.upa)];

        manifest out_manifest = m;
        out_manifest.prov = make_provenance(cmd.command_line, m.prov.seed);
        write_manifest(out_dir / "observations_manifest.json", out_manifest);
        write_observations_csv(out_dir / "observations.csv", obs);

        json summary;
        summary["n_elements"] = obs.size();
        summary["min_gain_db"] = min_gain;
        summary["max_gain_db"] = max_gain;
        summary["gain_span_db"] = max_gain - min_gain;
        summary["center_delay_s"] = center.delay;
        summary["center_distance_m"] = center.distance;
        summary["center_gain_db"] = center.gain_db;
        write_text_file(out_dir / "extract_summary.json", summary.dump(2) + "\n");

        std::printf("extract: %zu elements, gain %.4f .. %.4f dB (span %.4f dB)\n", obs.size(),
                    min_gain, max_gain, max_gain - min_gain);
        std::printf("extract: center delay %.6g ns, distance %.6f m\n", center.delay * 1e9,
                    center.distance);
        return 0;
    }

    int run_fit(const fit_command &cmd)
    {
        const std::filesystem::path out_dir = cmd.out_dir.empty() ? cmd.in_dir : cmd.out_dir;
        const manifest m = load_observation_manifest(cmd.in_dir);
        const observation_grid obs =
            read_observations_csv(find_artifact(cmd.in_dir, "observations.csv"), m);

        const double wavelength = m.sweep().center_wavelength();
        fit_config config;
        config.max_iterations = cmd.max_iterations;
        config.tolerance = cmd.tolerance;
        config.restarts = cmd.restarts;
        config.seed = cmd.seed;

        const fit_report report = fit(obs, wavelength, m.d0_m, config);

        fit_report_file file;
        file.params = report.params;
        file.canonical_params = canonical_form(report.params, m.d0_m);
        file.wavelength_m = wavelength;
        file.d0_m = m.d0_m;
        file.mse = report.mse;
        file.iterations = report.iterations;
        file.converged = report.converged;
        file.saturated = report.saturated;
        write_fit_report_json(out_dir / "fit_report.json", file);
        write_residuals_csv(out_dir / "residuals.csv", obs, report.residual_db);

        std::printf("fit: mse %.6g dB^2, %zu iterations, converged %s%s\n", report.mse,
                    report.iterations, report.converged ? "yes" : "no",
                    report.saturated ? " (exponent clamp engaged)" : "");
        std::printf("fit: d_ref %.6g m, c1 %.6g, c2 %.6g 1/m, c3 %.6g, c4 %.6g\n",
                    report.params.d_ref, report.params.c1, report.params.c2, report.params.c3,
                    report.params.c4);
        return 0;
    }

    int run_report(const report_command &cmd)
    {
        const std::filesystem::path out_dir =
            cmd.out_dir.empty() ? cmd.in_dir / "report" : cmd.out_dir;
        const manifest m = load_observation_manifest(cmd.in_dir);
        const observation_grid obs =
            read_observations_csv(find_artifact(cmd.in_dir, "observations.csv"), m);
        const upa_geometry &upa = obs.geometry.upa;

        // Measured surface: the per-element path gain dots.
        {
            std::string out = "dx_m,dz_m,gain_db\n";
            char buf[128];
            for (std::size_t e = 0; e < obs.size(); ++e)
            {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", upa.offsets[e].dx,
                              upa.offsets[e].dz, obs.observations[e].gain_db);
                out += buf;
            }
            write_text_file(out_dir / "measured_surface.csv", out);
        }

        // Model surface on the same lattice, when a fit is available.
        if (!cmd.fit_json.empty())
        {
            const fit_report_file fit = read_fit_report_json(cmd.fit_json);
            std::string out = "dx_m,dz_m,gain_db\n";
            char buf[128];
            compensated_sum sq;
            for (std::size_t e = 0; e < obs.size(); ++e)
            {
                const double pl = cross_field_pl(upa.offsets[e].dx, upa.offsets[e].dz,
                                                 fit.wavelength_m, fit.d0_m, fit.params);
                const double residual = pl + obs.observations[e].gain_db;
                sq.add(residual * residual);
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", upa.offsets[e].dx,
                              upa.offsets[e].dz, -pl);
                out += buf;
            }
            write_text_file(out_dir / "model_surface.csv", out);

            json summary;
            summary["recomputed_mse_db2"] = sq.value() / static_cast<double>(obs.size());
            summary["fit_mse_db2"] = fit.mse;
            write_text_file(out_dir / "report_summary.json", summary.dump(2) + "\n");
        }

        // Unwrapped phase per element plus per-row / per-column spans.
        {
            const std::vector<double> unwrapped = unwrap_phase_grid(obs);
            std::string out = "element_row,element_col,dx_m,dz_m,phase_rad\n";
            char buf[160];
            for (std::size_t e = 0; e < obs.size(); ++e)
            {
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%.17g,%.17g\n", upa.row_of(e),
                              upa.col_of(e), upa.offsets[e].dx, upa.offsets[e].dz, unwrapped[e]);
                out += buf;
            }
            write_text_file(out_dir / "phase_unwrapped.csv", out);

            std::string spans = "axis,index,span_rad\n";
            for (std::size_t r = 0; r < upa.rows; ++r)
            {
                double lo = unwrapped[r * upa.cols];
                double hi = lo;
                for (std::size_t c = 0; c < upa.cols; ++c)
                {
                    lo = std::min(lo, unwrapped[r * upa.cols + c]);
                    hi = std::max(hi, unwrapped[r * upa.cols + c]);
                }
                std::snprintf(buf, sizeof(buf), "row,%zu,%.17g\n", r, hi - lo);
                spans += buf;
            }
            for (std::size_t c = 0; c < upa.cols; ++c)
            {
                double lo = unwrapped[c];
                double hi = lo;
                for (std::size_t r = 0; r < upa.rows; ++r)
                {
                    lo = std::min(lo, unwrapped[r * upa.cols + c]);
                    hi = std::max(hi, unwrapped[r * upa.cols + c]);
                }
                std::snprintf(buf, sizeof(buf), "col,%zu,%.17g\n", c, hi - lo);
                spans += buf;
            }
            write_text_file(out_dir / "phase_spans.csv", spans);
        }

        // Field-region assessment for the nominal scenario.
        {
            const scenario_geometry nominal = m.scenario();
            rayleigh_file r;
            r.wavelength_m = m.sweep().center_wavelength();
            r.aperture_m = nominal.upa.aperture();
            r.d0_m = m.d0_m;
            r.boundary_band = cmd.boundary_band;
            r.assessment = classify_region(nominal, r.wavelength_m, cmd.boundary_band);
            write_rayleigh_json(out_dir / "rayleigh_assessment.json", r);

            std::printf("report: region %s, max phase error %.4f rad (pi/8 = %.4f)\n",
                        to_string(r.assessment.region).c_str(), r.assessment.max_phase_error,
                        pi / 8.0);
        }

        std::printf("report: wrote %s\n", out_dir.string().c_str());
        return 0;
    }

    int run_rayleigh(const rayleigh_command &cmd)
    {
        check_positive(cmd.frequency_hz, "frequency");
        const scenario_geometry scenario =
            make_scenario(build_upa(cmd.rows, cmd.cols, cmd.spacing_m), cmd.d0_m, cmd.theta_rad);
        const double wavelength = speed_of_light / cmd.frequency_hz;
        const rayleigh_assessment a = classify_region(scenario, wavelength, cmd.boundary_band);

        std::printf("aperture           %.6g m\n", scenario.upa.aperture());
        std::printf("wavelength         %.6g m\n", wavelength);
        std::printf("rayleigh distance  %.6g m\n", a.rayleigh_distance);
        std::printf("d0                 %.6g m\n", cmd.d0_m);
        std::printf("region             %s\n", to_string(a.region).c_str());
        std::printf("max phase error    %.6g rad (pi/8 = %.6g)\n", a.max_phase_error, pi / 8.0);

        if (!cmd.json_out.empty())
        {
            rayleigh_file r;
            r.wavelength_m = wavelength;
            r.aperture_m = scenario.upa.aperture();
            r.d0_m = cmd.d0_m;
            r.boundary_band = cmd.boundary_band;
            r.assessment = a;
            write_rayleigh_json(cmd.json_out, r);
        }
        return 0;
    }

} // namespace crossfield::cli

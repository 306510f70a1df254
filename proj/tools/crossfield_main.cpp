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

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crossfield/commands.hpp"
#include "crossfield/common.hpp"

namespace
{
    using crossfield::cli::case_preset;
    using nlohmann::json;

    // JSON adapter for CLI11's config machinery: top-level keys are global
    // options, nested objects are subcommand scopes. Command-line flags beat
    // config values.
    class json_config : public CLI::Config
    {
      public:
        std::string to_config(const CLI::App *, bool, bool, std::string) const override
        {
            return "{}\n";
        }

        std::vector<CLI::ConfigItem> from_config(std::istream &input) const override
        {
            json j;
            try
            {
                input >> j;
            }
            catch (const json::exception &e)
            {
                throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
            }
            std::vector<CLI::ConfigItem> items;
            collect(j, {}, items);
            return items;
        }

      private:
        static void collect(const json &j, std::vector<std::string> parents,
                            std::vector<CLI::ConfigItem> &items)
        {
            for (const auto &[key, value] : j.items())
            {
                if (value.is_object())
                {
                    auto scoped = parents;
                    scoped.push_back(key);
                    collect(value, scoped, items);
                    continue;
                }
                CLI::ConfigItem item;
                item.parents = parents;
                item.name = key;
                if (value.is_array())
                {
                    for (const auto &v : value)
                        item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
                }
                else
                {
                    item.inputs.push_back(value.is_string() ? value.get<std::string>()
                                                            : value.dump());
                }
                items.push_back(std::move(item));
            }
        }
    };

    std::string join_command_line(int argc, char **argv)
    {
        std::string cmd;
        for (int i = 0; i < argc; ++i)
        {
            if (i > 0)
                cmd += ' ';
            cmd += argv[i];
        }
        return cmd;
    }

    std::vector<std::array<double, 4>> parse_specular(const std::vector<std::string> &specs)
    {
        std::vector<std::array<double, 4>> out;
        for (const std::string &spec : specs)
        {
            std::array<double, 4> v{};
            std::size_t pos = 0;
            for (int i = 0; i < 4; ++i)
            {
                std::size_t used = 0;
                v[i] = std::stod(spec.substr(pos), &used);
                pos += used;
                if (i < 3)
                {
                    if (pos >= spec.size() || spec[pos] != ',')
                        throw std::invalid_argument("--specular expects x,y,z,loss_db");
                    ++pos;
                }
            }
            if (pos != spec.size())
                throw std::invalid_argument("--specular expects x,y,z,loss_db");
            out.push_back(v);
        }
        return out;
    }
} // namespace

int main(int argc, char **argv)
{
    using namespace crossfield;
    using namespace crossfield::cli;

    CLI::App app{"spherical-wave UPA channel synthesis, path extraction and "
                 "cross-field path loss fitting"};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<json_config>());
    app.set_config("--config", "", "JSON file with per-subcommand option values");

    std::uint64_t seed = 0;
    std::string out_dir = ".";
    unsigned threads = 0;
    app.add_option("--seed", seed, "seed for synthesis noise, jitter and fitting restarts");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    // synth ----------------------------------------------------------------
    synth_command synth;
    int case_number = 0;
    std::vector<std::string> specular_specs;
    CLI::App *synth_app = app.add_subcommand("synth", "synthesize a CTF grid");
    synth_app->add_option("--case", case_number, "measurement preset 1|2|3 (16x16|32x32|64x64)")
        ->check(CLI::Range(1, 3));
    synth_app->add_option("--rows", synth.rows, "UPA rows");
    synth_app->add_option("--cols", synth.cols, "UPA columns");
    synth_app->add_option("--spacing", synth.spacing_m, "element spacing [m]");
    synth_app->add_option("--d0", synth.d0_m, "boresight distance to the receiver [m]");
    synth_app->add_option("--theta", synth.theta_rad, "receive angle off broadside [rad]");
    synth_app->add_option("--f-start", synth.f_start_hz, "sweep start [Hz]");
    synth_app->add_option("--f-stop", synth.f_stop_hz, "sweep stop [Hz]");
    synth_app->add_option("--n-points", synth.n_points, "sweep points");
    synth_app->add_option("--qx", synth.pattern_qx, "element pattern exponent along x");
    synth_app->add_option("--qz", synth.pattern_qz, "element pattern exponent along z");
    double noise_snr = 0.0;
    CLI::Option *noise_opt =
        synth_app->add_option("--noise-snr-db", noise_snr, "add complex Gaussian noise at this SNR");
    synth_app->add_option("--jitter-sigma", synth.jitter_sigma_m,
                          "positioning error std dev [m], applied to the synthesized offsets");
    synth_app->add_option("--excess-loss-db", synth.direct_excess_loss_db,
                          "extra loss on the direct path [dB]");
    synth_app->add_option("--specular", specular_specs,
                          "extra specular path as x,y,z,loss_db (repeatable)");
    synth_app->add_flag("--gzip", synth.gzip, "write ctf.csv.gz instead of ctf.csv");

    // extract --------------------------------------------------------------
    extract_command extract;
    std::string window_name = "rectangular";
    CLI::App *extract_app = app.add_subcommand("extract", "CTF -> CIR -> per-element observables");
    extract_app->add_option("--in-dir", extract.in_dir, "directory with manifest.json and ctf.csv");
    extract_app
        ->add_option("--window", window_name, "frequency-domain window before the transform")
        ->check(CLI::IsMember({"rectangular", "hann"}));
    extract_app->add_option("--noise-floor-db", extract.noise_floor_db,
                            "reject elements peaking this far below the grid maximum");

    // fit ------------------------------------------------------------------
    fit_command fit;
    CLI::App *fit_app = app.add_subcommand("fit", "fit the cross-field model to observations");
    fit_app->add_option("--in-dir", fit.in_dir, "directory with observations.csv and a manifest");
    fit_app->add_option("--max-iterations", fit.max_iterations, "simplex iterations per restart");
    fit_app->add_option("--tolerance", fit.tolerance, "simplex spread tolerance [dB^2]");
    fit_app->add_option("--restarts", fit.restarts, "number of seeded restarts");

    // report ---------------------------------------------------------------
    report_command report;
    CLI::App *report_app =
        app.add_subcommand("report", "emit plot-ready surfaces, phase unwraps and the assessment");
    report_app->add_option("--in-dir", report.in_dir,
                           "directory with observations.csv and a manifest");
    report_app->add_option("--fit", report.fit_json, "fit_report.json for the model surface");
    report_app->add_option("--boundary-band", report.boundary_band,
                           "relative band around the Rayleigh distance");

    // rayleigh ---------------------------------------------------------------
    rayleigh_command rayleigh;
    int rayleigh_case = 0;
    CLI::App *rayleigh_app =
        app.add_subcommand("rayleigh", "field-region assessment for a UPA layout");
    rayleigh_app->add_option("--case", rayleigh_case, "measurement preset 1|2|3")
        ->check(CLI::Range(1, 3));
    rayleigh_app->add_option("--rows", rayleigh.rows, "UPA rows");
    rayleigh_app->add_option("--cols", rayleigh.cols, "UPA columns");
    rayleigh_app->add_option("--spacing", rayleigh.spacing_m, "element spacing [m]");
    rayleigh_app->add_option("--d0", rayleigh.d0_m, "boresight distance [m]");
    rayleigh_app->add_option("--theta", rayleigh.theta_rad, "receive angle off broadside [rad]");
    rayleigh_app->add_option("--freq", rayleigh.frequency_hz, "evaluation frequency [Hz]");
    rayleigh_app->add_option("--boundary-band", rayleigh.boundary_band,
                             "relative band around the Rayleigh distance");
    rayleigh_app->add_option("--json", rayleigh.json_out, "also write the assessment as JSON");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    const std::string command_line = join_command_line(argc, argv);
    try
    {
        if (synth_app->parsed())
        {
            if (case_number != 0)
            {
                const case_preset preset = preset_for_case(case_number);
                if (synth_app->count("--rows") == 0)
                    synth.rows = preset.rows;
                if (synth_app->count("--cols") == 0)
                    synth.cols = preset.cols;
                if (synth_app->count("--spacing") == 0)
                    synth.spacing_m = preset.spacing_m;
                if (synth_app->count("--d0") == 0)
                    synth.d0_m = preset.d0_m;
            }
            if (noise_opt->count() > 0)
                synth.noise_snr_db = noise_snr;
            synth.specular = parse_specular(specular_specs);
            synth.seed = seed;
            synth.threads = threads;
            synth.out_dir = out_dir;
            synth.command_line = command_line;
            return run_synth(synth);
        }
        if (extract_app->parsed())
        {
            extract.window =
                window_name == "hann" ? window_kind::hann : window_kind::rectangular;
            extract.threads = threads;
            if (app.count("--out-dir") > 0)
                extract.out_dir = out_dir;
            extract.command_line = command_line;
            return run_extract(extract);
        }
        if (fit_app->parsed())
        {
            fit.seed = seed;
            if (app.count("--out-dir") > 0)
                fit.out_dir = out_dir;
            fit.command_line = command_line;
            return run_fit(fit);
        }
        if (report_app->parsed())
        {
            if (app.count("--out-dir") > 0)
                report.out_dir = out_dir;
            report.command_line = command_line;
            return run_report(report);
        }
        if (rayleigh_app->parsed())
        {
            if (rayleigh_case != 0)
            {
                const case_preset preset = preset_for_case(rayleigh_case);
                if (rayleigh_app->count("--rows") == 0)
                    rayleigh.rows = preset.rows;
                if (rayleigh_app->count("--cols") == 0)
                    rayleigh.cols = preset.cols;
                if (rayleigh_app->count("--spacing") == 0)
                    rayleigh.spacing_m = preset.spacing_m;
                if (rayleigh_app->count("--d0") == 0)
                    rayleigh.d0_m = preset.d0_m;
            }
            return run_rayleigh(rayleigh);
        }
    }
    catch (const no_path_found &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    catch (const degenerate_grid &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

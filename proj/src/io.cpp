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

#include "crossfield/io.hpp"

#include <zlib.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <string_view>

#include <json.hpp>

#include "crossfield/common.hpp"

namespace crossfield
{
    using nlohmann::json;

    scenario_geometry manifest::scenario() const
    {
        return make_scenario(build_upa(rows, cols, spacing_m), d0_m, theta_rad);
    }

    sweep_plan manifest::sweep() const
    {
        return make_sweep(f_start_hz, f_stop_hz, n_points);
    }

    manifest make_manifest(const scenario_geometry &scenario, const sweep_plan &sweep,
                           provenance prov)
    {
        manifest m;
        m.rows = scenario.upa.rows;
        m.cols = scenario.upa.cols;
        m.spacing_m = scenario.upa.spacing;
        m.d0_m = scenario.d0;
        m.theta_rad = scenario.theta;
        m.f_start_hz = sweep.f_start;
        m.f_stop_hz = sweep.f_stop;
        m.n_points = sweep.n_points;
        m.prov = std::move(prov);
        return m;
    }

    std::string iso_timestamp_utc()
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm_utc{};
        gmtime_r(&t, &tm_utc);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        return buf;
    }

    namespace
    {
        bool wants_gzip(const std::filesystem::path &path)
        {
            return path.extension() == ".gz";
        }

        void rename_over(const std::filesystem::path &tmp, const std::filesystem::path &path)
        {
            std::error_code ec;
            std::filesystem::rename(tmp, path, ec);
            if (ec)
            {
                std::filesystem::remove(tmp, ec);
                throw io_error("cannot move temporary file onto " + path.string());
            }
        }
    } // namespace

    void write_text_file(const std::filesystem::path &path, const std::string &content)
    {
        if (path.has_parent_path())
        {
            std::error_code ec;
            std::filesystem::create_directories(path.parent_path(), ec);
        }
        const std::filesystem::path tmp = path.string() + ".tmp";

        if (wants_gzip(path))
        {
            gzFile gz = gzopen(tmp.string().c_str(), "wb6");
            if (gz == nullptr)
                throw io_error("cannot open " + tmp.string() + " for writing");
            const int written =
                gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
            const int rc = gzclose(gz);
            if (written != static_cast<int>(content.size()) || rc != Z_OK)
            {
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw io_error("failed writing " + tmp.string());
            }
        }
        else
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw io_error("cannot open " + tmp.string() + " for writing");
            out.write(content.data(), static_cast<std::streamsize>(content.size()));
            out.flush();
            if (!out)
            {
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw io_error("failed writing " + tmp.string());
            }
        }
        rename_over(tmp, path);
    }

    std::string read_text_file(const std::filesystem::path &path)
    {
        // gzread passes plain files through unchanged, so one code path covers
        // both compressed and uncompressed inputs.
        gzFile gz = gzopen(path.string().c_str(), "rb");
        if (gz == nullptr)
            throw io_error("cannot open " + path.string());
        std::string content;
        char buf[1 << 16];
        int got = 0;
        while ((got = gzread(gz, buf, sizeof(buf))) > 0)
            content.append(buf, static_cast<std::size_t>(got));
        const bool failed = got < 0;
        gzclose(gz);
        if (failed)
            throw io_error("failed reading " + path.string());
        return content;
    }

    namespace
    {
        void append_double(std::string &out, double v)
        {
            char buf[40];
            const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
            out.append(buf, static_cast<std::size_t>(len));
        }

        json params_to_json(const cross_field_params &p)
        {
            return json{{"d_ref_m", p.d_ref}, {"c1", p.c1}, {"c2_per_m", p.c2},
                        {"c3", p.c3},         {"c4", p.c4}};
        }

        cross_field_params params_from_json(const json &j)
        {
            cross_field_params p;
            p.d_ref = j.at("d_ref_m").get<double>();
            p.c1 = j.at("c1").get<double>();
            p.c2 = j.at("c2_per_m").get<double>();
            p.c3 = j.at("c3").get<double>();
            p.c4 = j.at("c4").get<double>();
            return p;
        }

        json rayleigh_to_json(const rayleigh_assessment &a)
        {
            return json{{"rayleigh_distance_m", a.rayleigh_distance},
                        {"region", to_string(a.region)},
                        {"max_phase_error_rad", a.max_phase_error},
                        {"phase_error_below_pi_over_8", a.max_phase_error < pi / 8.0}};
        }

        rayleigh_assessment rayleigh_from_json(const json &j)
        {
            rayleigh_assessment a;
            a.rayleigh_distance = j.at("rayleigh_distance_m").get<double>();
            a.region = field_region_from_string(j.at("region").get<std::string>());
            a.max_phase_error = j.at("max_phase_error_rad").get<double>();
            return a;
        }

        // Line-oriented CSV cursor over an in-memory file.
        class csv_reader
        {
          public:
            csv_reader(std::string_view text, std::string file) : text_(text), file_(std::move(file))
            {
            }

            bool next_line(std::string_view &line)
            {
                while (pos_ < text_.size())
                {
                    std::size_t end = text_.find('\n', pos_);
                    if (end == std::string_view::npos)
                        end = text_.size();
                    line = text_.substr(pos_, end - pos_);
                    pos_ = end + 1;
                    ++line_no_;
                    if (!line.empty() && line.back() == '\r')
                        line.remove_suffix(1);
                    if (!line.empty())
                        return true;
                }
                return false;
            }

            [[noreturn]] void fail(const std::string &what) const
            {
                throw io_error(file_ + ":" + std::to_string(line_no_) + ": " + what);
            }

          private:
            std::string_view text_;
            std::string file_;
            std::size_t pos_ = 0;
            std::size_t line_no_ = 0;
        };

        double parse_double(csv_reader &reader, std::string_view &line)
        {
            std::size_t comma = line.find(',');
            const std::string_view field =
                comma == std::string_view::npos ? line : line.substr(0, comma);
            line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{} || ptr != field.data() + field.size())
                reader.fail("malformed number '" + std::string(field) + "'");
            return v;
        }
    } // namespace

    void write_manifest(const std::filesystem::path &path, const manifest &m)
    {
        json j;
        j["schema_version"] = m.schema_version;
        j["geometry"] = {{"rows", m.rows},
                         {"cols", m.cols},
                         {"spacing_m", m.spacing_m},
                         {"d0_m", m.d0_m},
                         {"theta_rad", m.theta_rad}};
        j["sweep"] = {{"f_start_hz", m.f_start_hz},
                      {"f_stop_hz", m.f_stop_hz},
                      {"n_points", m.n_points}};
        j["provenance"] = {{"command", m.prov.command},
                           {"seed", m.prov.seed},
                           {"timestamp", m.prov.timestamp}};
        if (m.rayleigh.has_value())
            j["rayleigh"] = rayleigh_to_json(*m.rayleigh);
        write_text_file(path, j.dump(2) + "\n");
    }

    manifest read_manifest(const std::filesystem::path &path)
    {
        json j;
        try
        {
            j = json::parse(read_text_file(path));
        }
        catch (const json::exception &e)
        {
            throw io_error(path.string() + ": " + e.what());
        }
        try
        {
            manifest m;
            m.schema_version = j.at("schema_version").get<std::string>();
            if (m.schema_version != "1")
                throw io_error(path.string() + ": unsupported schema_version '" +
                               m.schema_version + "'");
            const json &g = j.at("geometry");
            m.rows = g.at("rows").get<std::size_t>();
            m.cols = g.at("cols").get<std::size_t>();
            m.spacing_m = g.at("spacing_m").get<double>();
            m.d0_m = g.at("d0_m").get<double>();
            m.theta_rad = g.at("theta_rad").get<double>();
            const json &s = j.at("sweep");
            m.f_start_hz = s.at("f_start_hz").get<double>();
            m.f_stop_hz = s.at("f_stop_hz").get<double>();
            m.n_points = s.at("n_points").get<std::size_t>();
            if (j.contains("provenance"))
            {
                const json &p = j.at("provenance");
                m.prov.command = p.value("command", "");
                m.prov.seed = p.value("seed", std::uint64_t{0});
                m.prov.timestamp = p.value("timestamp", "");
            }
            if (j.contains("rayleigh"))
                m.rayleigh = rayleigh_from_json(j.at("rayleigh"));
            return m;
        }
        catch (const json::exception &e)
        {
            throw io_error(path.string() + ": " + e.what());
        }
    }

    void write_ctf_csv(const std::filesystem::path &path, const ctf_grid &grid)
    {
        const std::size_t n_el = grid.n_elements();
        const std::size_t n_pt = grid.sweep.n_points;
        std::string out;
        out.reserve(n_el * n_pt * 64 + 64);
        out += "element_index,freq_hz,re,im\n";
        for (std::size_t e = 0; e < n_el; ++e)
        {
            const std::complex<double> *row = grid.samples.data() + e * n_pt;
            for (std::size_t n = 0; n < n_pt; ++n)
            {
                out += std::to_string(e);
                out += ',';
                append_double(out, grid.sweep.frequency(n));
                out += ',';
                append_double(out, row[n].real());
                out += ',';
                append_double(out, row[n].imag());
                out += '\n';
            }
        }
        write_text_file(path, out);
    }

    ctf_grid read_ctf_csv(const std::filesystem::path &path, const manifest &m)
    {
        ctf_grid grid;
        grid.geometry = m.scenario();
        grid.sweep = m.sweep();
        const std::size_t n_el = grid.n_elements();
        const std::size_t n_pt = grid.sweep.n_points;
        grid.samples.resize(n_el * n_pt);

        const std::string text = read_text_file(path);
        csv_reader reader(text, path.string());
        std::string_view line;
        if (!reader.next_line(line) || line != "element_index,freq_hz,re,im")
            throw io_error(path.string() + ": missing ctf header");

        for (std::size_t i = 0; i < n_el * n_pt; ++i)
        {
            if (!reader.next_line(line))
                reader.fail("file ends before manifest dimensions are filled (" +
                            std::to_string(i) + " of " + std::to_string(n_el * n_pt) + " rows)");
            const std::size_t e = i / n_pt;
            const std::size_t n = i % n_pt;
            const double index = parse_double(reader, line);
            if (index != static_cast<double>(e))
                reader.fail("element_index " + std::to_string(index) + " does not match manifest scan order");
            const double freq = parse_double(reader, line);
            const double expected = grid.sweep.frequency(n);
            if (std::abs(freq - expected) > 1e-6 * expected)
                reader.fail("frequency does not match the manifest sweep");
            const double re = parse_double(reader, line);
            const double im = parse_double(reader, line);
            if (!std::isfinite(re) || !std::isfinite(im))
                reader.fail("non-finite sample");
            grid.samples[i] = {re, im};
        }
        if (reader.next_line(line))
            reader.fail("more rows than the manifest dimensions allow");
        return grid;
    }

    void write_observations_csv(const std::filesystem::path &path, const observation_grid &grid)
    {
        const upa_geometry &upa = grid.geometry.upa;
        std::string out;
        out.reserve(grid.size() * 160 + 80);
        out += "element_row,element_col,dx_m,dz_m,delay_s,distance_m,gain_db,phase_rad\n";
        for (std::size_t e = 0; e < grid.size(); ++e)
        {
            const path_observation &o = grid.observations[e];
            out += std::to_string(upa.row_of(e));
            out += ',';
            out += std::to_string(upa.col_of(e));
            out += ',';
            append_double(out, upa.offsets[e].dx);
            out += ',';
            append_double(out, upa.offsets[e].dz);
            out += ',';
            append_double(out, o.delay);
            out += ',';
            append_double(out, o.distance);
            out += ',';
            append_double(out, o.gain_db);
            out += ',';
            append_double(out, o.phase);
            out += '\n';
        }
        write_text_file(path, out);
    }

    observation_grid read_observations_csv(const std::filesystem::path &path, const manifest &m)
    {
        observation_grid grid;
        grid.geometry = m.scenario();
        grid.ref_frequency = m.sweep().center_frequency();
        const std::size_t n_el = grid.geometry.upa.size();
        grid.observations.resize(n_el);

        const std::string text = read_text_file(path);
        csv_reader reader(text, path.string());
        std::string_view line;
        if (!reader.next_line(line) ||
            line != "element_row,element_col,dx_m,dz_m,delay_s,distance_m,gain_db,phase_rad")
            throw io_error(path.string() + ": missing observation header");

        for (std::size_t e = 0; e < n_el; ++e)
        {
            if (!reader.next_line(line))
                reader.fail("file ends before manifest dimensions are filled");
            const double row = parse_double(reader, line);
            const double col = parse_double(reader, line);
            if (row != static_cast<double>(grid.geometry.upa.row_of(e)) ||
                col != static_cast<double>(grid.geometry.upa.col_of(e)))
                reader.fail("element indices do not match manifest scan order");
            grid.geometry.upa.offsets[e].dx = parse_double(reader, line);
            grid.geometry.upa.offsets[e].dz = parse_double(reader, line);
            path_observation &o = grid.observations[e];
            o.delay = parse_double(reader, line);
            o.distance = parse_double(reader, line);
            o.gain_db = parse_double(reader, line);
            o.phase = parse_double(reader, line);
            if (!std::isfinite(o.delay) || !std::isfinite(o.distance) || !std::isfinite(o.gain_db) ||
                !std::isfinite(o.phase))
                reader.fail("non-finite observation");
        }
        if (reader.next_line(line))
            reader.fail("more rows than the manifest dimensions allow");
        return grid;
    }

    void write_residuals_csv(const std::filesystem::path &path, const observation_grid &grid,
                             const std::vector<double> &residual_db)
    {
        if (residual_db.size() != grid.size())
            throw std::invalid_argument("residual count does not match the observation grid");
        const upa_geometry &upa = grid.geometry.upa;
        std::string out;
        out.reserve(grid.size() * 160 + 80);
        out += "element_row,element_col,dx_m,dz_m,delay_s,distance_m,residual_db,phase_rad\n";
        for (std::size_t e = 0; e < grid.size(); ++e)
        {
            const path_observation &o = grid.observations[e];
            out += std::to_string(upa.row_of(e));
            out += ',';
            out += std::to_string(upa.col_of(e));
            out += ',';
            append_double(out, upa.offsets[e].dx);
            out += ',';
            append_double(out, upa.offsets[e].dz);
            out += ',';
            append_double(out, o.delay);
            out += ',';
            append_double(out, o.distance);
            out += ',';
            append_double(out, residual_db[e]);
            out += ',';
            append_double(out, o.phase);
            out += '\n';
        }
        write_text_file(path, out);
    }

    void write_fit_report_json(const std::filesystem::path &path, const fit_report_file &report)
    {
        json j;
        j["schema_version"] = "1";
        j["wavelength_m"] = report.wavelength_m;
        j["d0_m"] = report.d0_m;
        j["params"] = params_to_json(report.params);
        j["canonical_params"] = params_to_json(report.canonical_params);
        j["mse_db2"] = report.mse;
        j["iterations"] = report.iterations;
        j["converged"] = report.converged;
        j["saturated"] = report.saturated;
        write_text_file(path, j.dump(2) + "\n");
    }

    fit_report_file read_fit_report_json(const std::filesystem::path &path)
    {
        try
        {
            const json j = json::parse(read_text_file(path));
            fit_report_file r;
            r.params = params_from_json(j.at("params"));
            r.canonical_params = params_from_json(j.at("canonical_params"));
            r.wavelength_m = j.at("wavelength_m").get<double>();
            r.d0_m = j.at("d0_m").get<double>();
            r.mse = j.at("mse_db2").get<double>();
            r.iterations = j.at("iterations").get<std::size_t>();
            r.converged = j.at("converged").get<bool>();
            r.saturated = j.value("saturated", false);
            return r;
        }
        catch (const json::exception &e)
        {
            throw io_error(path.string() + ": " + e.what());
        }
    }

    void write_rayleigh_json(const std::filesystem::path &path, const rayleigh_file &r)
    {
        json j = rayleigh_to_json(r.assessment);
        j["wavelength_m"] = r.wavelength_m;
        j["aperture_m"] = r.aperture_m;
        j["d0_m"] = r.d0_m;
        j["boundary_band"] = r.boundary_band;
        write_text_file(path, j.dump(2) + "\n");
    }

} // namespace crossfield

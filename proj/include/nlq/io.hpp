#pragma once

// JSON and CSV emitters. Numbers use shortest round-trip formatting, CSV uses LF endings and a
// header row, so identical inputs give byte-identical output.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "nlq/field.hpp"
#include "nlq/integrator.hpp"
#include "nlq/models.hpp"
#include "nlq/solvers.hpp"

namespace nlq {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc{}) throw InternalError("number formatting failed");
    return std::string(buf, res.ptr);
}

inline Json to_json(const SolveReport& r) {
    Json j;
    j["kind"] = std::string(to_string(r.kind));
    j["answer"] = r.answer;
    j["bits"] = r.bits;
    j["gate_times"] = r.gate_times;
    j["total_time"] = r.total_time;
    j["preparations"] = r.preparations;
    j["heights"] = r.heights;
    j["initial_heights"] = r.initial_heights;
    j["n"] = r.n;
    Json params;
    params["g"] = r.params.g;
    params["eps"] = r.params.eps;
    params["mode"] = std::string(to_string(r.params.mode));
    params["seed"] = r.params.readout.seed;
    params["readout"] = std::string(to_string(r.params.readout.mode));
    params["reps"] = r.params.readout.repetitions;
    j["params"] = std::move(params);
    return j;
}

// Inverse of to_json for the fields a report carries.
inline SolveReport report_from_json(const Json& j) {
    SolveReport r;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "unique") {
        r.kind = ProblemKind::unique;
    } else if (kind == "decide") {
        r.kind = ProblemKind::decide;
    } else if (kind == "count") {
        r.kind = ProblemKind::count;
    } else {
        throw DomainError("unknown report kind '" + kind + "'");
    }
    r.answer = j.at("answer").get<std::uint64_t>();
    r.bits = j.at("bits").get<std::vector<int>>();
    r.gate_times = j.at("gate_times").get<std::vector<double>>();
    r.total_time = j.at("total_time").get<double>();
    r.preparations = j.at("preparations").get<std::uint64_t>();
    r.heights = j.at("heights").get<std::vector<double>>();
    r.initial_heights = j.value("initial_heights", std::vector<double>{});
    r.n = j.at("n").get<int>();
    const auto& p = j.at("params");
    r.params.g = p.at("g").get<double>();
    r.params.eps = p.at("eps").get<double>();
    r.params.mode = p.at("mode").get<std::string>() == "circuit" ? PrepMode::circuit : PrepMode::analytic;
    r.params.readout.seed = p.at("seed").get<std::uint64_t>();
    r.params.readout.mode = p.value("readout", std::string("sign")) == "sampled" ? ReadoutMode::sampled
                                                                                : ReadoutMode::sign;
    r.params.readout.repetitions = p.value("reps", 11);
    return r;
}

// ---------------------------------------------------------------------------------------------
// CSV

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }

    CsvWriter& cell(double x) { return raw(format_double(x)); }
    CsvWriter& cell(std::int64_t x) { return raw(std::to_string(x)); }
    CsvWriter& cell(int x) { return raw(std::to_string(x)); }
    CsvWriter& cell(std::string_view s) { return raw(s); }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

private:
    CsvWriter& raw(std::string_view s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }

    std::ostream& out_;
    bool first_ = true;
};

// t,x,y,z plus E for models with a conserved energy.
inline void write_trajectory_csv(std::ostream& out, const NonlinearModel& m, const Trajectory& tr) {
    const bool with_energy = std::holds_alternative<TorsionModel>(m);
    std::vector<std::string> header{"t", "x", "y", "z"};
    if (with_energy) header.emplace_back("E");
    CsvWriter csv(out, header);
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
        const auto& r = tr.points[i];
        csv.cell(tr.times[i]).cell(r.x()).cell(r.y()).cell(r.z());
        if (with_energy) csv.cell(energy(m, r));
        csv.end_row();
    }
}

// Velocity field on the full validation lattice.
inline void write_field_grid_csv(std::ostream& out, const NonlinearModel& m) {
    CsvWriter csv(out, {"x", "y", "z", "vx", "vy", "vz", "residual"});
    for (const auto& r : fibonacci_grid()) {
        const Vec3 v = velocity(m, r.vec());
        csv.cell(r.x()).cell(r.y()).cell(r.z()).cell(v.x).cell(v.y).cell(v.z).cell(std::abs(dot(v, r.vec())));
        csv.end_row();
    }
}

inline void write_grid_diagnostics_csv(std::ostream& out, const std::vector<GridDiagnostic>& rows) {
    CsvWriter csv(out, {"theta", "phi", "div_v", "curl_u", "tangency_residual"});
    for (const auto& d : rows) {
        csv.cell(d.theta).cell(d.phi).cell(d.div_v).cell(d.curl_u).cell(d.tangency_residual);
        csv.end_row();
    }
}

// ---------------------------------------------------------------------------------------------
// Gate-time scaling table

struct BenchRow {
    int n = 0;
    double eps = 0.0;
    double torsion_exact = 0.0;
    double torsion_approx = 0.0;
    double torsion_increment = 0.0;  // exact(n) - exact(n - 1); 0 on the first row of a block
    double morse_smale_exact = 0.0;
    double morse_smale_approx = 0.0;
    double pitchfork_gate = 0.0;
    double count_total = 0.0;        // (n + 1) * pitchfork_gate
    double count_asymptotic = 0.0;
};

inline std::vector<BenchRow> bench_table(int n_min, int n_max, const std::vector<double>& eps_list, double g) {
    if (n_min < 1 || n_max > kMaxAnalyticBits || n_min > n_max) {
        throw DomainError("bench range must satisfy 1 <= n-min <= n-max <= 62");
    }
    std::vector<BenchRow> rows;
    for (double eps : eps_list) {
        double previous = 0.0;
        for (int n = n_min; n <= n_max; ++n) {
            BenchRow row;
            row.n = n;
            row.eps = eps;
            const auto torsion = torsion_gate_time(theta_of_s(1, n), g);
            row.torsion_exact = torsion.exact;
            row.torsion_approx = torsion.approximate;
            row.torsion_increment = n == n_min ? 0.0 : torsion.exact - previous;
            previous = torsion.exact;
            const auto ms = morse_smale_gate_time(n, eps, g);
            row.morse_smale_exact = ms.exact;
            row.morse_smale_approx = ms.approximate;
            const auto total = total_time_report(n, eps, g);
            row.pitchfork_gate = total.per_gate;
            row.count_total = total.total;
            row.count_asymptotic = total.asymptotic;
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    CsvWriter csv(out, {"n", "eps", "torsion_exact", "torsion_approx", "torsion_increment", "morse_smale_exact",
                        "morse_smale_approx", "pitchfork_gate", "count_total", "count_asymptotic"});
    for (const auto& r : rows) {
        csv.cell(r.n).cell(r.eps).cell(r.torsion_exact).cell(r.torsion_approx).cell(r.torsion_increment);
        csv.cell(r.morse_smale_exact).cell(r.morse_smale_approx).cell(r.pitchfork_gate).cell(r.count_total);
        csv.cell(r.count_asymptotic);
        csv.end_row();
    }
}

inline Json bench_json(const std::vector<BenchRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json j;
        j["n"] = r.n;
        j["eps"] = r.eps;
        j["torsion_exact"] = r.torsion_exact;
        j["torsion_approx"] = r.torsion_approx;
        j["torsion_increment"] = r.torsion_increment;
        j["morse_smale_exact"] = r.morse_smale_exact;
        j["morse_smale_approx"] = r.morse_smale_approx;
        j["pitchfork_gate"] = r.pitchfork_gate;
        j["count_total"] = r.count_total;
        j["count_asymptotic"] = r.count_asymptotic;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace nlq

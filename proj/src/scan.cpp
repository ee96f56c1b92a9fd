// Scan engine: grid construction, per-cell evaluation with a worker pool,
// and deterministic CSV assembly.
//
// Every cell is an independent computation addressed by a flat row-major
// index (coupling outer, temperature inner). Workers pull indices from an
// atomic counter and store finished rows into a pre-sized vector, so the
// final file content is a pure function of the ScanSpec no matter how many
// workers ran. A cell that throws records the error kind in its `error`
// column; the scan always completes and reports how many cells failed.
#include "uhlmann/scan.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <system_error>
#include <thread>

#include "uhlmann/bcs.hpp"
#include "uhlmann/errors.hpp"
#include "uhlmann/fidelity.hpp"
#include "uhlmann/holonomy.hpp"
#include "uhlmann/realspace.hpp"

namespace uhlmann {

namespace {

struct CommandInfo {
    ScanCommand command;
    const char* name;
    const char* header;
    int value_columns;
};

constexpr CommandInfo kCommands[] = {
    {ScanCommand::FidelityScan, "fidelity-scan",
     "param,T,F,F_density,trace_sqrt,delta,error", 4},
    {ScanCommand::DeltaScan, "delta-scan",
     "param,T,F,F_density,trace_sqrt,delta,error", 4},
    {ScanCommand::HolonomyScan, "holonomy-scan", "param,T,theta,error", 1},
    {ScanCommand::PhaseScan, "phase-scan", "param,T,theta,phase,error", 2},
    {ScanCommand::EdgeScan, "edge-scan", "param,T,ratio,n_edge,n_bulk,error", 3},
    {ScanCommand::BcsScan, "bcs-scan",
     "V,T,gap,F_dT,delta_dT,F_dV,delta_dV,error", 5},
    {ScanCommand::GapCurve, "gap-curve", "V,T,gap,residual,error", 2},
};

const CommandInfo& info_for(ScanCommand command) {
    for (const CommandInfo& info : kCommands) {
        if (info.command == command) return info;
    }
    throw InvalidSpec("unknown scan command");
}

bool is_bcs_command(ScanCommand command) {
    return command == ScanCommand::BcsScan || command == ScanCommand::GapCurve;
}

bool wants_momentum_grid(ScanCommand command) {
    switch (command) {
    case ScanCommand::FidelityScan:
    case ScanCommand::DeltaScan:
    case ScanCommand::HolonomyScan:
    case ScanCommand::PhaseScan:
        return true;
    default:
        return false;
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidSpec(message);
}

void check_axis(const AxisSpec& axis, const char* label) {
    require(std::isfinite(axis.lo) && std::isfinite(axis.hi),
            std::string(label) + " axis bounds must be finite");
    require(axis.steps >= 1, std::string(label) + " axis needs at least one step");
    require(axis.lo <= axis.hi, std::string(label) + " axis needs lo <= hi");
    if (axis.steps == 1) {
        require(axis.lo == axis.hi,
                std::string(label) + " axis with one step needs lo == hi");
    }
}

// Swept-coupling names accepted per model family.
bool sweep_name_ok(const std::string& model, const std::string& name) {
    if (model == "creutz") return name == "M";
    if (model == "ssh") return name == "v" || name == "w";
    if (model == "kitaev") return name == "mu";
    if (model == "bcs") return name == "V";
    return false;
}

bool fixed_name_ok(const std::string& model, const std::string& name) {
    if (model == "creutz") return name == "K" || name == "phi";
    if (model == "ssh") return name == "v" || name == "w";
    if (model == "kitaev") return name == "t" || name == "delta";
    if (model == "bcs") return name == "omega_d" || name == "n0" || name == "mu";
    return false;
}

// One scan cell: value columns on success, the error kind otherwise.
struct CellResult {
    std::vector<double> values;
    std::string error;
};

CellResult compute_cell(const ScanSpec& spec, double p, double T) {
    CellResult cell;
    try {
        switch (spec.command) {
        case ScanCommand::FidelityScan:
        case ScanCommand::DeltaScan: {
            const ModelParams a = make_model(spec, p, T);
            const ModelParams b = make_model(spec, p + spec.dparam, T + spec.dtemp);
            const FidelityReport r =
                fidelity_total(a, b, MomentumGrid::uniform(spec.nk));
            cell.values = {r.F, r.F_density, r.trace_sqrt, r.delta};
            break;
        }
        case ScanCommand::HolonomyScan: {
            const ModelParams m = make_model(spec, p, T);
            cell.values = {holonomy_angle(m, T, MomentumGrid::uniform(spec.nk))};
            break;
        }
        case ScanCommand::PhaseScan: {
            const ModelParams m = make_model(spec, p, T);
            const HolonomyResult r = holonomy(m, T, MomentumGrid::uniform(spec.nk));
            cell.values = {r.theta, r.phase};
            break;
        }
        case ScanCommand::EdgeScan: {
            const ModelParams m = make_model(spec, p, T);
            const OccupationProfile profile =
                spec.mu_qp ? thermal_occupations(m, spec.sites, T, *spec.mu_qp)
                           : thermal_occupations(m, spec.sites, T);
            double edge = 0.0;
            for (int i = 0; i < spec.edge_window; ++i) edge += profile.n[i];
            edge /= spec.edge_window;
            cell.values = {edge_bulk_ratio(profile, spec.edge_window), edge,
                           profile.n[profile.n.size() / 2]};
            break;
        }
        case ScanCommand::BcsScan: {
            const BCSParams bp = make_bcs_params(spec);
            const double gap = solve_gap(p, T, bp).delta;
            const FidelityReport rT = bcs_fidelity_total(p, T, p, T + spec.dtemp, bp);
            const FidelityReport rV = bcs_fidelity_total(p, T, p + spec.dparam, T, bp);
            cell.values = {gap, rT.F, rT.delta, rV.F, rV.delta};
            break;
        }
        case ScanCommand::GapCurve: {
            const GapSolution sol = solve_gap(p, T, make_bcs_params(spec));
            cell.values = {sol.delta, sol.residual};
            break;
        }
        }
    } catch (const Error& e) {
        cell.values.clear();
        cell.error = e.kind();
    } catch (const std::exception&) {
        cell.values.clear();
        cell.error = "Error";
    }
    return cell;
}

std::string format_row(const ScanSpec& spec, double p, double T, const CellResult& cell) {
    const int value_columns = info_for(spec.command).value_columns;
    std::string row = format_double(p);
    row += ',';
    row += format_double(T);
    for (int c = 0; c < value_columns; ++c) {
        row += ',';
        if (cell.error.empty()) row += format_double(cell.values[c]);
    }
    row += ',';
    row += cell.error;
    return row;
}

void write_profile_csv(const ScanSpec& spec) {
    const ModelParams m = make_model(spec, spec.param.value(0), spec.temp.value(0));
    const OccupationProfile profile =
        spec.mu_qp ? thermal_occupations(m, spec.sites, spec.temp.value(0), *spec.mu_qp)
                   : thermal_occupations(m, spec.sites, spec.temp.value(0));
    std::ofstream out(spec.profile_out, std::ios::binary);
    if (!out) throw IoError("cannot open profile output " + spec.profile_out);
    out << "site,n\n";
    for (std::size_t i = 0; i < profile.n.size(); ++i) {
        out << i + 1 << ',' << format_double(profile.n[i]) << '\n';
    }
    if (!out.good()) throw IoError("failed writing profile output " + spec.profile_out);
}

} // namespace

std::optional<ScanCommand> parse_command(const std::string& name) {
    for (const CommandInfo& info : kCommands) {
        if (name == info.name) return info.command;
    }
    return std::nullopt;
}

const char* command_name(ScanCommand command) { return info_for(command).name; }

double AxisSpec::value(int i) const {
    if (steps == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::string format_double(double x) {
    char buf[32];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

ModelParams make_model(const ScanSpec& spec, double value, double T) {
    auto fixed_or = [&](const std::string& name, double fallback) {
        for (const auto& [key, val] : spec.fixed) {
            if (key == name) return val;
        }
        return fallback;
    };
    ModelParams m;
    m.T = T;
    if (spec.model == "creutz") {
        CreutzParams p;
        p.K = fixed_or("K", p.K);
        p.phi_flux = fixed_or("phi", p.phi_flux);
        p.M = value;
        m.kind = p;
    } else if (spec.model == "ssh") {
        SSHParams p;
        p.v = fixed_or("v", p.v);
        p.w = fixed_or("w", p.w);
        (spec.param_name == "v" ? p.v : p.w) = value;
        m.kind = p;
    } else if (spec.model == "kitaev") {
        KitaevParams p;
        p.t = fixed_or("t", p.t);
        p.delta = fixed_or("delta", p.delta);
        p.mu = value;
        m.kind = p;
    } else {
        throw InvalidSpec("no lattice model named " + spec.model);
    }
    return m;
}

BCSParams make_bcs_params(const ScanSpec& spec) {
    BCSParams p;
    for (const auto& [key, val] : spec.fixed) {
        if (key == "omega_d") p.omega_D = val;
        else if (key == "n0") p.N0 = val;
        else if (key == "mu") p.mu = val;
    }
    return p;
}

void validate(const ScanSpec& spec) {
    static const char* kModels[] = {"creutz", "ssh", "kitaev", "bcs"};
    bool known = false;
    for (const char* name : kModels) known = known || spec.model == name;
    require(known, "model must be one of creutz, ssh, kitaev, bcs");

    if (is_bcs_command(spec.command)) {
        require(spec.model == "bcs",
                std::string(command_name(spec.command)) + " needs --model bcs");
    } else {
        require(spec.model != "bcs",
                std::string(command_name(spec.command)) + " needs a lattice model");
    }
    require(sweep_name_ok(spec.model, spec.param_name),
            "cannot sweep parameter '" + spec.param_name + "' of model " + spec.model);
    for (const auto& [key, val] : spec.fixed) {
        require(fixed_name_ok(spec.model, key),
                "cannot fix parameter '" + key + "' of model " + spec.model);
        require(key != spec.param_name, "parameter '" + key + "' is already swept");
        require(std::isfinite(val), "fixed parameter '" + key + "' must be finite");
    }

    check_axis(spec.param, "param");
    check_axis(spec.temp, "temp");
    require(spec.temp.lo >= 0.0, "temperatures must be nonnegative");
    require(std::isfinite(spec.dparam) && std::isfinite(spec.dtemp),
            "probe offsets must be finite");

    switch (spec.command) {
    case ScanCommand::FidelityScan:
    case ScanCommand::DeltaScan:
        require(spec.dparam != 0.0 || spec.dtemp != 0.0,
                "fidelity probes need a nonzero --dparam or --dtemp");
        break;
    case ScanCommand::BcsScan:
        require(spec.dparam > 0.0 && spec.dtemp > 0.0,
                "bcs-scan needs positive --dparam and --dtemp");
        break;
    case ScanCommand::GapCurve:
        require(spec.param.steps == 1, "gap-curve sweeps temperature only; "
                                       "give --param V=<value> a single point");
        break;
    case ScanCommand::EdgeScan:
        require(spec.temp.lo > 0.0, "edge-scan needs temperatures > 0");
        require(spec.sites >= 8, "edge-scan needs --sites >= 8");
        require(spec.edge_window >= 1 && 4 * spec.edge_window <= spec.sites,
                "edge window must cover between 1 site and a quarter of the chain");
        break;
    default:
        break;
    }

    if (wants_momentum_grid(spec.command)) {
        require(spec.nk >= 3, "momentum grid needs --nk >= 3");
    }
    require(spec.workers >= 1, "worker count must be >= 1");
    require(!spec.out_path.empty(), "missing --out path");
    if (!spec.profile_out.empty()) {
        require(spec.command == ScanCommand::EdgeScan,
                "--profile-out applies to edge-scan only");
        require(spec.param.steps == 1 && spec.temp.steps == 1,
                "--profile-out needs a single-cell scan (1x1 grid)");
    }
    if (spec.mu_qp) {
        require(std::isfinite(*spec.mu_qp), "--mu-qp must be finite");
    }
}

ScanResult run_scan(const ScanSpec& spec) {
    const std::size_t cells =
        static_cast<std::size_t>(spec.param.steps) * static_cast<std::size_t>(spec.temp.steps);
    ScanResult result;
    result.header = info_for(spec.command).header;
    result.rows.resize(cells);
    result.total_cells = cells;

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failed{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells) return;
            const int ip = static_cast<int>(i) / spec.temp.steps;
            const int it = static_cast<int>(i) % spec.temp.steps;
            const double p = spec.param.value(ip);
            const double T = spec.temp.value(it);
            const CellResult cell = compute_cell(spec, p, T);
            if (!cell.error.empty()) failed.fetch_add(1);
            result.rows[i] = format_row(spec, p, T, cell);
        }
    };

    const std::size_t pool =
        std::min<std::size_t>(static_cast<std::size_t>(spec.workers), cells);
    if (pool <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(work);
        for (std::thread& t : threads) t.join();
    }
    result.failed_cells = failed.load();
    return result;
}

int run_scan_to_file(const ScanSpec& spec) {
    const ScanResult result = run_scan(spec);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (spec.out_path != "-") {
        file.open(spec.out_path, std::ios::binary);
        if (!file) throw IoError("cannot open output " + spec.out_path);
        out = &file;
    }
    *out << result.header << '\n';
    for (const std::string& row : result.rows) *out << row << '\n';
    out->flush();
    if (!out->good()) throw IoError("failed writing output " + spec.out_path);

    if (!spec.profile_out.empty()) write_profile_csv(spec);

    if (result.failed_cells > 0) {
        std::cerr << result.failed_cells << " of " << result.total_cells
                  << " cells failed; see the error column\n";
    }
    return (result.total_cells > 0 && result.failed_cells == result.total_cells) ? 4 : 0;
}

} // namespace uhlmann

// Parameter-sweep driver behind the command-line tool. A ScanSpec names one
// of the scan commands, the model family, the swept coupling axis, the
// temperature axis, and the probe offsets; run_scan evaluates every grid cell
// in a worker pool and assembles CSV rows in fixed row-major order (coupling
// outer, temperature inner), so the bytes written never depend on the worker
// count. Library failures inside a cell are recorded in the trailing `error`
// column instead of aborting the sweep.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uhlmann/models.hpp"

namespace uhlmann {

enum class ScanCommand {
    FidelityScan,
    DeltaScan,
    HolonomyScan,
    PhaseScan,
    EdgeScan,
    BcsScan,
    GapCurve,
};

// Returns the command for its CLI spelling ("fidelity-scan", ...), or nullopt.
std::optional<ScanCommand> parse_command(const std::string& name);
const char* command_name(ScanCommand command);

struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;
    double value(int i) const; // lo + i*(hi-lo)/(steps-1); steps == 1 gives lo
};

struct ScanSpec {
    ScanCommand command = ScanCommand::FidelityScan;
    std::string model;      // creutz | ssh | kitaev | bcs
    std::string param_name; // swept coupling: M, v, w, mu, or V
    AxisSpec param;
    AxisSpec temp;
    double dparam = 0.0;    // coupling probe offset
    double dtemp = 0.0;     // temperature probe offset
    int nk = 501;           // momentum grid points
    int sites = 300;        // open-chain length (edge-scan)
    int edge_window = 1;    // sites averaged into the edge occupation
    std::optional<double> mu_qp; // quasi-particle potential; unset -> default
    int workers = 1;
    std::string out_path;
    std::string profile_out; // edge-scan only: per-site occupations, 1x1 grid
    std::vector<std::pair<std::string, double>> fixed; // non-swept couplings
};

// Checks everything knowable before computing: command/model compatibility,
// axis sanity, offsets, grid sizes, window constraints. Throws InvalidSpec.
void validate(const ScanSpec& spec);

// Builds the lattice model at the given swept-coupling value and temperature,
// with fixed couplings applied over the family defaults.
ModelParams make_model(const ScanSpec& spec, double value, double T);

// Continuum pairing parameters with fixed couplings (omega_d, n0) applied.
BCSParams make_bcs_params(const ScanSpec& spec);

struct ScanResult {
    std::string header;
    std::vector<std::string> rows; // CSV rows without line terminators
    std::size_t total_cells = 0;
    std::size_t failed_cells = 0;
};

// Evaluates the grid. The ScanSpec must already be validated.
ScanResult run_scan(const ScanSpec& spec);

// Runs the scan and writes it to spec.out_path ("-" for stdout) with LF line
// endings. Returns the process exit status: 0 normally, 4 when every cell
// failed. Throws IoError when the output cannot be written.
int run_scan_to_file(const ScanSpec& spec);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

// ---- Scan summaries -------------------------------------------------------

struct SummaryOptions {
    double delta_threshold = 1e-3; // a cell counts as indicator-positive above this
};

struct TemperatureSummary {
    double T = 0.0;
    std::optional<double> drop;    // 1 - min over the coupling axis of F
    std::optional<double> argmin;  // coupling value attaining the minimum
    int positive_delta = 0;        // cells with delta > threshold
    int valid = 0;                 // cells without an error entry
    int failed = 0;                // cells with an error entry
};

struct PhaseStep {
    double param = 0.0;
    double T_lo = 0.0; // last temperature on the pi branch
    double T_hi = 0.0; // first temperature on the 0 branch
    double T_U = 0.0;  // midpoint estimate of the step
};

struct ScanSummary {
    std::vector<TemperatureSummary> by_temperature;
    std::vector<PhaseStep> phase_steps; // populated for phase-scan output
    std::string text;  // aligned human-readable table
    std::string jsonl; // one JSON object per line, machine-readable
};

// Reads a CSV produced by run_scan and reduces it. Throws MalformedCsv when
// the file does not look like scan output and IoError when it cannot be read.
ScanSummary summarize(const std::string& csv_path, const SummaryOptions& options = {});

} // namespace uhlmann

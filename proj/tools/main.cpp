// Command-line driver. First argument selects the scan command or
// `summarize`; the remaining flags fill a ScanSpec. Exit codes: 0 success,
// 2 invalid arguments or spec, 3 I/O or file-content failure, 4 every scan
// cell failed.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uhlmann/errors.hpp"
#include "uhlmann/scan.hpp"

namespace {

constexpr const char* kUsage =
    "usage: uhlmann-scan <command> [options]\n"
    "\n"
    "commands:\n"
    "  fidelity-scan   fidelity, density, trace-sqrt and indicator per cell\n"
    "  delta-scan      same grid, emphasis on the indicator column\n"
    "  holonomy-scan   holonomy angle theta per cell\n"
    "  phase-scan      theta and the geometric phase per cell\n"
    "  edge-scan       edge/bulk occupation ratio on an open chain\n"
    "  bcs-scan        gap and thermal/coupling probe fidelities\n"
    "  gap-curve       self-consistent gap along a temperature axis\n"
    "  summarize       reduce a scan CSV to a transition report\n"
    "\n"
    "run `uhlmann-scan <command> --help` for the command's options.\n";

// Parses "name=lo:hi:steps" or "name=value" into the ScanSpec's swept axis.
void parse_param_axis(const std::string& text, uhlmann::ScanSpec& spec) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw uhlmann::InvalidSpec("--param needs name=lo:hi:steps, got '" + text + "'");
    }
    spec.param_name = text.substr(0, eq);
    const std::string range = text.substr(eq + 1);
    try {
        const std::size_t c1 = range.find(':');
        if (c1 == std::string::npos) {
            spec.param.lo = spec.param.hi = std::stod(range);
            spec.param.steps = 1;
            return;
        }
        const std::size_t c2 = range.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument(range);
        spec.param.lo = std::stod(range.substr(0, c1));
        spec.param.hi = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
        spec.param.steps = std::stoi(range.substr(c2 + 1));
    } catch (const std::exception&) {
        throw uhlmann::InvalidSpec("cannot parse --param range '" + range + "'");
    }
}

void parse_temp_axis(const std::string& text, uhlmann::AxisSpec& axis) {
    try {
        const std::size_t c1 = text.find(':');
        if (c1 == std::string::npos) {
            axis.lo = axis.hi = std::stod(text);
            axis.steps = 1;
            return;
        }
        const std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument(text);
        axis.lo = std::stod(text.substr(0, c1));
        axis.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        axis.steps = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw uhlmann::InvalidSpec("cannot parse --temp range '" + text + "'");
    }
}

void parse_fixed(const std::vector<std::string>& entries, uhlmann::ScanSpec& spec) {
    for (const std::string& entry : entries) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw uhlmann::InvalidSpec("--fix needs name=value, got '" + entry + "'");
        }
        try {
            spec.fixed.emplace_back(entry.substr(0, eq), std::stod(entry.substr(eq + 1)));
        } catch (const std::exception&) {
            throw uhlmann::InvalidSpec("cannot parse --fix value in '" + entry + "'");
        }
    }
}

int run_scan_command(uhlmann::ScanCommand command, int argc, char** argv) {
    CLI::App app{std::string("uhlmann-scan ") + uhlmann::command_name(command)};
    std::string model, param_text, temp_text, out_path, profile_out;
    std::vector<std::string> fixed_entries;
    double dparam = 0.0, dtemp = 0.0, mu_qp = 0.0;
    int nk = 501, sites = 300, edge_window = 1, workers = 1;

    app.add_option("--model", model, "creutz | ssh | kitaev | bcs")->required();
    app.add_option("--param", param_text,
                   "swept coupling, name=lo:hi:steps (or name=value)")
        ->required();
    app.add_option("--temp", temp_text, "temperature axis, lo:hi:steps (or value)")
        ->required();
    app.add_option("--dparam", dparam, "coupling probe offset");
    auto* dtemp_opt = app.add_option("--dtemp", dtemp, "temperature probe offset");
    auto* dparam_opt = app.get_option("--dparam");
    app.add_option("--nk", nk, "momentum grid points (default 501)");
    app.add_option("--sites", sites, "open-chain length (default 300)");
    app.add_option("--edge-window", edge_window,
                   "sites averaged into the edge occupation (default 1)");
    auto* mu_qp_opt =
        app.add_option("--mu-qp", mu_qp, "quasi-particle chemical potential "
                                         "(default -1e-3 * dominant hopping)");
    app.add_option("--out", out_path, "output CSV path, or - for stdout")->required();
    app.add_option("--profile-out", profile_out,
                   "per-site occupation CSV (edge-scan, 1x1 grid only)");
    app.add_option("--workers", workers, "worker threads (default 1)");
    app.add_option("--fix", fixed_entries, "fix a non-swept coupling, name=value")
        ->take_all();
    app.set_config("--config", "", "plain key=value file; command-line flags override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::FileError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    uhlmann::ScanSpec spec;
    spec.command = command;
    spec.model = model;
    parse_param_axis(param_text, spec);
    parse_temp_axis(temp_text, spec.temp);
    spec.dparam = dparam;
    spec.dtemp = dtemp;
    if (command == uhlmann::ScanCommand::BcsScan) {
        if (dparam_opt->count() == 0) spec.dparam = 1e-3;
        if (dtemp_opt->count() == 0) spec.dtemp = 1e-3;
    }
    spec.nk = nk;
    spec.sites = sites;
    spec.edge_window = edge_window;
    if (mu_qp_opt->count() > 0) spec.mu_qp = mu_qp;
    spec.workers = workers;
    spec.out_path = out_path;
    spec.profile_out = profile_out;
    parse_fixed(fixed_entries, spec);

    uhlmann::validate(spec);
    return uhlmann::run_scan_to_file(spec);
}

int run_summarize_command(int argc, char** argv) {
    CLI::App app{"uhlmann-scan summarize"};
    std::string csv_path, json_out;
    double delta_threshold = 1e-3;
    app.add_option("csv", csv_path, "scan CSV to reduce")->required();
    app.add_option("--delta-threshold", delta_threshold,
                   "indicator positivity threshold (default 1e-3)");
    app.add_option("--json-out", json_out,
                   "write the JSON lines to this path instead of stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    uhlmann::SummaryOptions options;
    options.delta_threshold = delta_threshold;
    const uhlmann::ScanSummary summary = uhlmann::summarize(csv_path, options);
    std::cout << summary.text;
    if (json_out.empty()) {
        std::cout << summary.jsonl;
    } else {
        std::FILE* f = std::fopen(json_out.c_str(), "wb");
        if (!f) throw uhlmann::IoError("cannot open " + json_out);
        const std::size_t n =
            std::fwrite(summary.jsonl.data(), 1, summary.jsonl.size(), f);
        const bool ok = n == summary.jsonl.size() && std::fclose(f) == 0;
        if (!ok) throw uhlmann::IoError("failed writing " + json_out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return 2;
    }
    const std::string command = argv[1];
    if (command == "-h" || command == "--help" || command == "help") {
        std::cout << kUsage;
        return 0;
    }

    // Hand the remaining arguments to the per-command parser with argv[0]
    // kept as the program name.
    std::vector<char*> rest;
    rest.push_back(argv[0]);
    for (int i = 2; i < argc; ++i) rest.push_back(argv[i]);
    const int rest_argc = static_cast<int>(rest.size());

    try {
        if (command == "summarize") {
            return run_summarize_command(rest_argc, rest.data());
        }
        const std::optional<uhlmann::ScanCommand> scan = uhlmann::parse_command(command);
        if (!scan) {
            std::cerr << "unknown command '" << command << "'\n\n" << kUsage;
            return 2;
        }
        return run_scan_command(*scan, rest_argc, rest.data());
    } catch (const uhlmann::InvalidSpec& e) {
        std::cerr << "invalid spec: " << e.what() << '\n';
        return 2;
    } catch (const uhlmann::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const uhlmann::MalformedCsv& e) {
        std::cerr << "malformed csv: " << e.what() << '\n';
        return 3;
    } catch (const uhlmann::Error& e) {
        std::cerr << e.kind() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

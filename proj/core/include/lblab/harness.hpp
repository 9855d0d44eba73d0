#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lblab/instances.hpp"
#include "lblab/optimizers.hpp"

namespace lblab::harness {

enum ExitCode : int { kOk = 0, kFailure = 1, kEnvelopeViolation = 2, kConfigError = 3 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::vector<std::string> optimizers{"sag"};
    FamilySpec problem;  // family kind, mu, L, R, lambda, n, d
    std::size_t grid_points = 17;
    std::size_t iterations = 200;
    std::size_t seeds = 100;
    std::string output_dir;  // empty: write to stdout
    int uniform_grid = 4097;
    int l1_grid = 8193;
    std::size_t memory = 100;
    std::string sampling = "with";
    std::optional<std::string> source;  // file the config came from

    // Canonical key=value text; the hash is FNV-1a over it.
    std::string canonical() const;
    std::string hash() const;
    void validate() const;
};

// Flat INI: [experiment] family, optimizers, iterations, seeds, output, sampling;
// [problem] mu, L (or kappa), R, lambda, n, d; [grid] points; [approx]
// uniform_grid, l1_grid; [lbfgs] memory. Throws ConfigError with the file
// and line of the offending entry.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// ------------------------------------------------------------ output

// CSV with a leading `# ...` line naming units and the config hash.
class CsvTable {
public:
    CsvTable(std::vector<std::string> columns, std::string units, std::string config_hash);

    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> columns_;
    std::string units_, hash_;
    std::vector<std::string> rows_;
};

std::string format_double(double v);

struct Series {
    std::string name;
    std::vector<double> x, y;
};

std::string svg_line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<Series>& series, bool log_y);

// Writes `content` to dir/name, or to `out` when dir is empty.
void emit(const std::string& dir, const std::string& name, const std::string& content, std::ostream& out);

// ------------------------------------------------------------ commands

struct BoundsArgs {
    std::string kind = "fsm";
    std::optional<double> L, mu, n, R, lambda, eps, alpha;
};
int cmd_bounds(const BoundsArgs& args, std::ostream& out);

struct ApproxCheckArgs {
    std::string norm = "all";  // uniform, l1, l2, all
    int k_max = 8;
    int uniform_grid = 4097;
    int l1_grid = 8193;
};
int cmd_approx_check(const ApproxCheckArgs& args, std::ostream& out);

struct TraceArgs {
    std::string optimizer = "gd";
    ExperimentConfig config;
    std::size_t k = 4;
    std::uint64_t seed = 0;
};
int cmd_trace(const TraceArgs& args, std::ostream& out);

struct Fig2Args {
    double L = 4.0, mu = 1.0;
    std::size_t k_max = 4, points = 1025;
    std::string svg_path;
};
int cmd_fig2(const Fig2Args& args, std::ostream& out);

struct Fig1Args {
    std::size_t d = 200;
    double kappa = 100.0, mu = 1.0;
    std::size_t iterations = 400;
    std::size_t memory = 100;
    std::string output_dir;
};
int cmd_fig1(const Fig1Args& args, std::ostream& out);

int cmd_run(const ExperimentConfig& config, std::ostream& out);
int cmd_envelope(const ExperimentConfig& config, std::ostream& out);
int cmd_sampling_compare(const ExperimentConfig& config, std::ostream& out);

struct VerifyOptions {
    std::string mutate;  // "", or "maxnorm-prefactor"
};
struct CheckResult {
    std::string module, name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};
// The invariant suite behind verify-all.
std::vector<CheckResult> property_suite(const VerifyOptions& options);
int cmd_verify_all(const VerifyOptions& options, std::ostream& out);

// Envelope for a family, in the error measure the audit compares against.
struct EnvelopeSpec {
    std::string measure;  // "suboptimality" or "distance"
    std::vector<double> values;
};
EnvelopeSpec family_envelope(const FamilySpec& spec, std::size_t iterations);

// Optimizer parameters derived from a configuration.
OptimizerParams optimizer_params(const ExperimentConfig& config);

}  // namespace lblab::harness

#ifndef OBMRR_EXPERIMENT_HPP
#define OBMRR_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obmrr/instance.hpp"

namespace obmrr {

enum class ArithMode { Auto, Exact, Double };

/// Exact accounting is used when d * |U| stays at or below this threshold
/// and the mode is Auto.
inline constexpr long kExactArithThreshold = 4096;

struct ExperimentConfig {
    std::string instance_path;              // informational; set by the CLI
    Instance instance;
    std::vector<std::string> algorithms;    // pd-ocr, pd-uniform, greedy
    bool analytic_params = true;            // derive betas/Gamma from gamma
    double gamma = 1.0 / 32.0;
    double beta1 = 50.0 / 99.0;
    double beta2 = 16.0 / 33.0;
    double Gamma = 50.0 / 99.0;
    ArithMode arith = ArithMode::Auto;
    long trials = 1;
    std::uint64_t seed = 1;
    int jobs = 1;

    void validate() const;  // at least one algorithm, trials >= 1
};

struct AlgoStats {
    std::string name;
    long trials = 0;
    double mean_matched = 0.0;
    double stderr_matched = 0.0;
    std::optional<std::string> primal, dual, audit_min;  // exact strings when rational
    std::optional<double> ratio_vs_opt, ratio_vs_lp;
};

struct ExperimentResult {
    std::optional<long> opt;        // empty when the state limit was exceeded
    std::optional<double> lp_bound;
    bool lp_optimal = true;
    bool exact_arith = false;
    std::vector<AlgoStats> algos;
    std::string csv;           // per-algorithm summary rows
    std::string summary_json;  // machine-readable report
};

/// Run every configured algorithm against the instance and aggregate: mean
/// matched count with standard error, offline baselines when computable,
/// ratios against both, and the dual-audit minimum. Deterministic given the
/// seed; jobs only splits trial ranges.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// The versioned summary-report schema, printed by the CLI --schema flag.
std::string report_schema();

enum class BatteryKind { OcrGuarantee, Reversal, DualAudit, GreedyBound };

std::optional<BatteryKind> battery_kind_from_string(const std::string& name);

struct BatteryOptions {
    double gamma = 1.0 / 32.0;
    long mc_trials = 100000;
    double z = 3.0;
    std::uint64_t seed = 20240311;
    int jobs = 1;
};

struct BatteryCase {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct BatteryReport {
    std::vector<BatteryCase> cases;
    bool pass = true;
};

/// Execute one checker battery over a corpus directory laid out as
/// corpus/traces/*.json (trace objects; names starting with "exact" get the
/// zero-tolerance enumeration path, others Monte Carlo) and
/// corpus/instances/*.json. Throws when the directory is missing.
BatteryReport run_battery(BatteryKind kind, const std::string& corpus_dir,
                          const BatteryOptions& options);

}  // namespace obmrr

#endif

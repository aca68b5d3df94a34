#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tsf::cli {

/// Bad flags, unknown config keys, missing required paths, out-of-range numbers.
class UsageError : public std::exception {
public:
    explicit UsageError(std::string message) : message_(std::move(message)) {}
    const char* what() const noexcept override { return message_.c_str(); }

private:
    std::string message_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverError = 1;
inline constexpr int kExitVerificationFailed = 2;
inline constexpr int kExitUsage = 64;

struct RunConfig {
    std::string command; ///< tensor-check | stokes-solve | ns-solve | verify | export-grid | manufacture | residual

    std::string tensor;
    std::string f;
    std::string g = "none";
    std::string u;
    std::string p;
    std::string in;
    std::string out;
    std::string out_u;
    std::string out_p;
    std::string out_f;
    std::string out_g;
    std::string report;

    double s = 1.0;
    double omega = 1.0;
    double tol = 1e-10;
    int max_iter = 100;
    int m = 8;
    int n = 2;
    int points = 0; ///< grid points per axis; 0 means 2m + 1
    std::uint64_t seed = 0;
    int draws = 50;
    std::string suite = "all";
    double amplitude = 0.1;
    std::string initial = "stokes";

    bool dealias = true;
    bool project_mean = true;
    bool nonlinear = false;

    /// Resolved option values of the command, "key = value" lines in flag-name order.
    std::vector<std::pair<std::string, std::string>> echo;
};

/// argv[0] is the program name, argv[1] the command. `--config <file>` supplies defaults as
/// `key = value` lines (key = long flag name); flags given on the command line win.
/// Throws UsageError naming the offending flag or key.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs the command. 0 success, 1 solver or I/O error (and non-converged ns-solve),
/// 2 verification failure.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + dispatch; usage errors give 64, --help gives 0.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tsf::cli

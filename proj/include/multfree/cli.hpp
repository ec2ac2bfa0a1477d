#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multfree/core.hpp"

namespace multfree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Malformed command-line input; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One realization in a p-grid sweep.
struct SweepRow {
    Int n = 0;
    Int a = 1;
    Int b = 2;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    Int size = 0;
    double analytic = 0.0;
    double ratio = 0.0;   // size / (n p); NaN when n p == 0
    double target = 0.0;  // b / (b + p)
};

inline constexpr const char* kSweepHeader = "n,a,b,p,seed,trial,size,analytic,ratio,target";

// 12 significant digits, "%.12g".
[[nodiscard]] std::string format_real(double x);

// "b/a" or "b". Syntax problems throw UsageError; a ratio <= 1 throws
// RatioNotGreaterThanOne.
[[nodiscard]] Multiplier parse_ratio(const std::string& text);

// "<start>:<stop>:<step>", endpoints inclusive. The step must divide the
// span to within 1e-9 and every point must lie in [0, 1].
[[nodiscard]] std::vector<double> parse_p_grid(const std::string& text);

[[nodiscard]] std::string to_csv_line(const SweepRow& row);
[[nodiscard]] SweepRow parse_csv_line(const std::string& line);

// Entry point behind the `multfree` executable; `args` excludes the program
// name. Returns the process exit code.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace multfree::cli

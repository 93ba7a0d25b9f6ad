#pragma once

#include <span>

namespace dsl {

/// Exit codes: 0 success, 2 configuration error, 3 data error, 4 address in use.
int cli_main(int argc, char** argv);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace dsl

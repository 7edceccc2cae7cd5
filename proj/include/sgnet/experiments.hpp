#pragma once

// Turns an ExperimentSpec into a long-format CSV table: one row per
// (series, grid point), every series named in the header.

#include <iosfwd>
#include <string>

#include "sgnet/config.hpp"

namespace sgnet::experiments {

/// Fixed-precision rendering used for every CSV cell ("inf", "nan" for
/// non-finite values).
std::string format_number(double v);

/// Writes the table for spec to os. Simulation columns appear only when
/// spec.sim is set. Numerical failures propagate as exceptions.
void run_experiment(const config::ExperimentSpec& spec, std::ostream& os, int jobs = 1);

}  // namespace sgnet::experiments

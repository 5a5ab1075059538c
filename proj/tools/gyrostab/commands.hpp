#pragma once

#include "gyrostab/config.hpp"

#include <iosfwd>

namespace gyrostab::cli {

int cmd_enumerate(const RunConfig& config, std::ostream& out);
int cmd_analyze(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_perturb(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

}  // namespace gyrostab::cli

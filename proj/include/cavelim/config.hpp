#pragma once

#include <istream>
#include <string>

#include "cavelim/model.hpp"

namespace cavelim {

// Text config format, one system per file:
//
//   # comment
//   [cavity]
//   omega = 10.0
//   kappa = 0.05
//   g0_a  = 0.2
//   g0_b  = 1.0
//   axis  = 0 1 0          # optional, default y
//
//   [emitter_a]
//   omega    = 10.0
//   gamma    = 0.05
//   position = 0 0 0
//
//   [ensemble_b]
//   omega     = 30.0
//   gamma     = 1.0
//   positions = 0 0.1 0; 0 0.2 0
//
// Vectors are three numbers separated by spaces or commas; position lists
// separate entries with ';'. Unknown sections or keys are errors, as are
// missing required keys. Errors carry file and line context.
SystemSpec parse_system_config(std::istream& in, const std::string& name);
SystemSpec load_system_config(const std::string& path);

}  // namespace cavelim

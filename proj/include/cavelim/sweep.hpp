#pragma once

#include <string>
#include <vector>

#include "cavelim/io.hpp"
#include "cavelim/model.hpp"

namespace cavelim {

struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

// Axis grammar: "path=min:max:count" (inclusive linear grid) or
// "path=v1,v2,v3" (explicit list).
SweepAxis parse_axis(const std::string& text);

// Scalar spec parameters addressable in sweeps: cavity.omega, cavity.kappa,
// cavity.g0_a, cavity.g0_b, emitter_a.omega, emitter_a.gamma,
// ensemble_b.omega, ensemble_b.gamma. Unknown path -> ConfigError.
void apply_spec_path(SystemSpec& spec, const std::string& path, double value);

struct SweepRequest {
  std::vector<SweepAxis> axes;
  // Output groups: "effective" (renormalized parameters), "validity"
  // (verdict + worst ratio), "polariton" (mode rates, shifts, weights).
  std::vector<std::string> outputs = {"effective", "validity"};
  long max_points = 200000;
  int threads = 0;  // 0: resolve from CAVELIM_THREADS, then hardware
};

struct SweepOutcome {
  Table table;                      // one row per grid point, axis columns first
  std::vector<std::string> status;  // "ok" or the per-point error message
  long failures = 0;
};

// Cartesian product of the axes over spec parameters, evaluated in parallel.
// Row order always follows grid iteration order (last axis fastest); a
// failing point records its error and the sweep continues.
SweepOutcome run_spec_sweep(const SystemSpec& base, const SweepRequest& req);

// Sweep directly over the reduced model: axes address polariton.g,
// polariton.mu, polariton.kappa, polariton.gamma, polariton.omega0.
// Outputs are fixed to the mode quantities.
SweepOutcome run_polariton_sweep(const SweepRequest& req);

// Flag value > CAVELIM_THREADS > hardware_concurrency, min 1.
int resolve_thread_count(int requested);

}  // namespace cavelim

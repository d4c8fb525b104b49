#include "cavelim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <thread>

#include "cavelim/classical.hpp"
#include "cavelim/elimination.hpp"

namespace cavelim {

namespace {

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

long checked_total(const std::vector<SweepAxis>& axes, long cap) {
  if (axes.empty()) throw ConfigError("sweep needs at least one axis");
  long total = 1;
  for (const auto& axis : axes) {
    if (axis.values.empty())
      throw ConfigError("axis '" + axis.path + "' has an empty grid");
    const auto n = static_cast<long>(axis.values.size());
    if (total > cap / n)
      throw ConfigError("sweep grid exceeds the cap of " +
                        std::to_string(cap) + " points");
    total *= n;
  }
  return total;
}

// Decompose a flat index into per-axis indices, last axis fastest.
std::vector<std::size_t> axis_indices(long flat,
                                      const std::vector<SweepAxis>& axes) {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    const auto n = static_cast<long>(axes[k].values.size());
    idx[k] = static_cast<std::size_t>(flat % n);
    flat /= n;
  }
  return idx;
}

struct PointResult {
  std::vector<std::string> cells;
  std::string status = "ok";
};

SweepOutcome run_parallel(
    const std::vector<SweepAxis>& axes, long cap, int threads,
    const std::vector<std::string>& columns,
    const std::function<std::vector<std::string>(const std::vector<double>&)>&
        eval) {
  const long total = checked_total(axes, cap);
  const std::size_t n_out = columns.size() - axes.size();

  std::vector<PointResult> results(static_cast<std::size_t>(total));
  std::atomic<long> cursor{0};
  auto worker = [&] {
    while (true) {
      const long i = cursor.fetch_add(1);
      if (i >= total) return;
      const auto idx = axis_indices(i, axes);
      std::vector<double> coords(axes.size());
      for (std::size_t k = 0; k < axes.size(); ++k)
        coords[k] = axes[k].values[idx[k]];
      PointResult& r = results[static_cast<std::size_t>(i)];
      r.cells.reserve(axes.size() + n_out);
      for (double c : coords) r.cells.push_back(format_double(c));
      try {
        auto out = eval(coords);
        if (out.size() != n_out)
          throw Error("sweep evaluator returned a wrong-width row");
        for (auto& cell : out) r.cells.push_back(std::move(cell));
      } catch (const std::exception& e) {
        r.status = e.what();
        for (std::size_t k = 0; k < n_out; ++k) r.cells.push_back("nan");
      }
    }
  };

  const int n_threads =
      static_cast<int>(std::min<long>(resolve_thread_count(threads), total));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepOutcome outcome;
  outcome.table.columns = columns;
  for (auto& r : results) {
    outcome.table.add_row(std::move(r.cells));
    if (r.status != "ok") ++outcome.failures;
    outcome.status.push_back(std::move(r.status));
  }
  return outcome;
}

const char* verdict_cell(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::marginal: return "marginal";
    default: return "fail";
  }
}

}  // namespace

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("axis must look like 'path=min:max:count' or "
                      "'path=v1,v2,...', got '" +
                      text + "'");
  SweepAxis axis;
  axis.path = text.substr(0, eq);
  const std::string grid = text.substr(eq + 1);
  if (grid.find(':') != std::string::npos) {
    const auto parts = split(grid, ':');
    if (parts.size() != 3)
      throw ConfigError("range grid must be min:max:count, got '" + grid +
                        "'");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double count_raw = parse_number(parts[2]);
    const auto count = static_cast<long>(count_raw);
    if (count < 1 || static_cast<double>(count) != count_raw)
      throw ConfigError("grid count must be a positive integer, got '" +
                        parts[2] + "'");
    if (count == 1) {
      axis.values.push_back(lo);
    } else {
      for (long i = 0; i < count; ++i)
        axis.values.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(count - 1));
    }
  } else {
    for (const auto& part : split(grid, ','))
      axis.values.push_back(parse_number(part));
  }
  if (axis.values.empty()) throw ConfigError("axis grid is empty");
  return axis;
}

void apply_spec_path(SystemSpec& spec, const std::string& path, double value) {
  if (path == "cavity.omega") spec.cavity.omega = value;
  else if (path == "cavity.kappa") spec.cavity.kappa = value;
  else if (path == "cavity.g0_a") spec.cavity.g0_a = value;
  else if (path == "cavity.g0_b") spec.cavity.g0_b = value;
  else if (path == "emitter_a.omega") spec.emitter_a.omega = value;
  else if (path == "emitter_a.gamma") spec.emitter_a.gamma = value;
  else if (path == "ensemble_b.omega") spec.ensemble_b.omega = value;
  else if (path == "ensemble_b.gamma") spec.ensemble_b.gamma = value;
  else
    throw ConfigError("unknown sweep path '" + path +
                      "' (scalar spec parameters only)");
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAVELIM_THREADS")) {
    const std::string text(env);
    try {
      const int n = std::stoi(text);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError("CAVELIM_THREADS must be a positive integer, got '" +
                      text + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SweepOutcome run_spec_sweep(const SystemSpec& base, const SweepRequest& req) {
  bool want_effective = false;
  bool want_validity = false;
  bool want_polariton = false;
  for (const auto& group : req.outputs) {
    if (group == "effective") want_effective = true;
    else if (group == "validity") want_validity = true;
    else if (group == "polariton") want_polariton = true;
    else
      throw ConfigError("unknown output group '" + group +
                        "' (expected effective, validity, polariton)");
  }
  if (!want_effective && !want_validity && !want_polariton)
    throw ConfigError("sweep output selection is empty");

  std::vector<std::string> columns;
  {
    SystemSpec scratch = base;  // surface bad path names before any work
    for (const auto& axis : req.axes) {
      apply_spec_path(scratch, axis.path, axis.values.front());
      columns.push_back(axis.path);
    }
  }
  if (want_effective)
    columns.insert(columns.end(),
                   {"delta_c_eff", "delta_a_eff", "g_a_eff", "kappa_eff",
                    "gamma_a_eff", "mu"});
  if (want_polariton)
    columns.insert(columns.end(), {"gamma_plus", "gamma_minus", "omega_plus",
                                   "omega_minus", "re_z_plus", "re_z_minus"});
  if (want_validity) columns.insert(columns.end(), {"worst_ratio", "verdict"});

  auto eval = [&, base](const std::vector<double>& coords) {
    SystemSpec spec = base;
    for (std::size_t k = 0; k < req.axes.size(); ++k)
      apply_spec_path(spec, req.axes[k].path, coords[k]);
    const CouplingSet cs = build_couplings(spec);
    const EffectiveParams p = effective_params(cs, spec);

    std::vector<std::string> cells;
    if (want_effective) {
      for (double v : {p.delta_c_eff, p.delta_a_eff, p.g_a_eff, p.kappa_eff,
                       p.gamma_a_eff, p.mu})
        cells.push_back(format_double(v));
    }
    if (want_polariton) {
      const PolaritonAnalysis pol = polariton_analysis(p);
      for (double v : {pol.gamma_plus, pol.gamma_minus, pol.omega_plus,
                       pol.omega_minus, pol.z_plus.real(), pol.z_minus.real()})
        cells.push_back(format_double(v));
    }
    if (want_validity) {
      const ValidityReport report = validity_report(spec, cs);
      const double worst =
          std::max({report.max_coupling_ratio, report.cavity_scale_ratio,
                    report.emitter_scale_ratio, report.coupling_scale_ratio});
      cells.push_back(format_double(worst));
      cells.push_back(verdict_cell(report.verdict));
    }
    return cells;
  };

  return run_parallel(req.axes, req.max_points, req.threads, columns, eval);
}

SweepOutcome run_polariton_sweep(const SweepRequest& req) {
  struct Slot {
    const char* path;
    double value;
  };
  std::vector<Slot> slots = {{"polariton.g", 0.0},
                             {"polariton.mu", 0.0},
                             {"polariton.kappa", 1.0},
                             {"polariton.gamma", 1.0},
                             {"polariton.omega0", 0.0}};
  std::vector<int> axis_slot(req.axes.size(), -1);
  for (std::size_t k = 0; k < req.axes.size(); ++k) {
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (req.axes[k].path == slots[s].path) axis_slot[k] = static_cast<int>(s);
    if (axis_slot[k] < 0)
      throw ConfigError("unknown polariton sweep path '" + req.axes[k].path +
                        "'");
  }

  std::vector<std::string> columns;
  for (const auto& axis : req.axes) columns.push_back(axis.path);
  columns.insert(columns.end(),
                 {"gamma_plus", "gamma_minus", "omega_plus", "omega_minus",
                  "re_z_plus", "im_z_plus", "re_z_minus", "im_z_minus"});

  auto eval = [&, slots](const std::vector<double>& coords) {
    auto local = slots;
    for (std::size_t k = 0; k < coords.size(); ++k)
      local[static_cast<std::size_t>(axis_slot[k])].value = coords[k];
    const PolaritonAnalysis pol =
        polariton_analysis(local[0].value, local[1].value, local[2].value,
                           local[3].value, local[4].value);
    std::vector<std::string> cells;
    for (double v : {pol.gamma_plus, pol.gamma_minus, pol.omega_plus,
                     pol.omega_minus, pol.z_plus.real(), pol.z_plus.imag(),
                     pol.z_minus.real(), pol.z_minus.imag()})
      cells.push_back(format_double(v));
    return cells;
  };

  return run_parallel(req.axes, req.max_points, req.threads, columns, eval);
}

}  // namespace cavelim

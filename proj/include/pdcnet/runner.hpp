#pragma once

// Executes a RunTask: builds networks, sweeps the scan grid, integrates the
// phase-locking flow, and packages the results as a CSV table plus a JSON
// summary.  Output is deterministic byte for byte: grid evaluation may be
// spread over threads (PDCNET_THREADS caps the pool) but results land by
// index and all numbers are printed with a fixed %.17g format.

#include <cstddef>
#include <string>

#include <json.hpp>

#include "pdcnet/config.hpp"

namespace pdcnet::cli {

struct RunOutput {
  nlohmann::ordered_json summary;
  std::string csv;  // empty for tasks with no tabular output
};

// Throws NetworkError or std::runtime_error when the task cannot be executed;
// problems a parser can catch never reach this point.
RunOutput run_task(const RunTask& task);

// Compiles the task's network once at the scan origin so component problems
// surface before any real work; returns the compile warnings.  Lock tasks
// have nothing to compile and return an empty list.
std::vector<std::string> validate_task(const RunTask& task);

// Thread pool width: PDCNET_THREADS when set (clamped to >= 1), otherwise
// hardware concurrency capped at 8.
std::size_t worker_count();

// %.17g, the round-trip format used everywhere in CSV output.
std::string format_double(double v);

}  // namespace pdcnet::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vibron/parallel.hpp"

namespace vibron::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kWorkersEnv = "VIBRON_WORKERS";

struct RunConfig {
  std::string command;
  /// Flattened keys (gamma, n, t_max, out, ...) after defaults, config file and flags merged.
  nlohmann::json params;
};

/// Defaults of every key a subcommand understands. Throws std::invalid_argument for an
/// unknown command.
nlohmann::json defaults(const std::string& command);
std::vector<std::string> commands();

/// Merges defaults < config file < flags. Unknown keys and mistyped values are reported in
/// `errors`, never thrown.
RunConfig resolve(const std::string& command, const nlohmann::json& file, const nlohmann::json& flags,
                  std::vector<std::string>& errors);

/// Every violated constraint, each naming its key. Empty means the config can run.
std::vector<std::string> validate(const RunConfig& config);

/// Pool of `workers` threads; exceptions from the body are rethrown on the caller.
ParallelFor thread_pool(std::size_t workers);

/// Flag > environment > hardware concurrency.
std::size_t resolve_workers(long flag_value);

/// Entry point. Exit codes: 0 ok, 1 numeric failure, 2 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vibron::cli

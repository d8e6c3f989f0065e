#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stylepatch/pipeline.hpp"

namespace stylepatch::app {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs `body`, mapping InputError / ContractViolation to kExitUsage and any
/// other exception to kExitRuntime. The message goes to `err`.
int guarded(std::ostream& err, const std::function<int()>& body);

struct RewriteOptions {
  std::filesystem::path corpus;
  std::string persona;  // bundle path; empty means STYLEPATCH_CONFIG
  std::filesystem::path out;
};

/// Writes the stylized repository and prints summary statistics.
RewriteStats cmd_rewrite(const RewriteOptions& options, std::ostream& out, std::ostream& err);

struct IndexOptions {
  std::filesystem::path repository;
  std::filesystem::path out;
};

/// Builds the index over c' and writes its postings snapshot.
void cmd_index(const IndexOptions& options, std::ostream& out);

struct ServingOptions {
  std::string persona;
  std::optional<std::filesystem::path> repository;  // defaults to the bundle's
  std::filesystem::path corpus;                     // generic dialogue corpus
  std::optional<double> trigger_rate;
};

struct ChatOptions : ServingOptions {
  bool debug = false;
};

/// Line-oriented REPL. Commands: ":rate X", ":debug on|off", ":quit".
/// Every other line is a user utterance; EOF ends the session.
void cmd_chat(const ChatOptions& options, std::istream& in, std::ostream& out);

struct EvalOptions : ServingOptions {
  std::filesystem::path queries;  // one query per line
  std::vector<double> rates;
  std::filesystem::path out;      // sweep CSV
};

/// Trigger-rate sweep: writes the CSV and prints a distinct-n report.
void cmd_eval(const EvalOptions& options, std::ostream& out);

/// "0,0.1,0.5" -> {0, 0.1, 0.5}; throws InputError on bad or unsorted input.
std::vector<double> parse_rates(const std::string& text);

}  // namespace stylepatch::app

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace bosegas::cli {

/// I/O failure while writing an artifact. Maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kDomainError = 3,
  kIoError = 4,
};

struct Artifact {
  std::string path;  ///< "-" for standard output
  std::string content;
};

struct Outcome {
  std::vector<Artifact> artifacts;
  std::string summary;  ///< one line, no newline
};

/// Computes every artifact of a config without touching the file system.
Outcome execute(const RunConfig& config);

/// Column names and rows of one sweep; rows follow the range order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string to_csv() const;
};

Table sweep_table(const RunConfig& config);

/// Writes `content` to `path` through a temporary file in the same directory
/// and a rename, so the target never holds a partial file.
void write_atomic(const std::string& path, const std::string& content);

/// execute() + atomic writes + summary line, with exceptions mapped to exit
/// codes and a diagnostic on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace bosegas::cli

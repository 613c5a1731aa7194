#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stridesea {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;

  std::string to_string() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
  }
  bool operator==(const SourceSpan&) const = default;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::string expected, std::string found)
      : Error(span.to_string() + " expected " + expected + ", found " + found),
        span_(std::move(span)),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string subject;
  std::string message;
  std::optional<SourceSpan> where = std::nullopt;

  std::string to_string() const {
    std::string prefix = where ? where->to_string() + ": " : "";
    return prefix + (severity == Severity::kError ? "error" : "warning") + ": " +
           (subject.empty() ? "" : subject + ": ") + message;
  }
  bool operator==(const Diagnostic&) const = default;
};

inline std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (d.severity != Severity::kError) continue;
    if (!out.empty()) out += "; ";
    out += d.to_string();
  }
  return out;
}

// Semantic failure: broken cross-references, out-of-range values, bad names.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message)
      : Error(message), diagnostics_{{Severity::kError, "", std::move(message)}} {}
  explicit ValidationError(std::vector<Diagnostic> diagnostics)
      : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class UnknownNameError : public ValidationError {
 public:
  UnknownNameError(const std::string& what_kind, std::string name)
      : ValidationError("unknown " + what_kind + " \"" + name + "\""), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(std::vector<std::string> uncoverable)
      : Error(make_message(uncoverable)), uncoverable_(std::move(uncoverable)) {}
  const std::vector<std::string>& uncoverable() const { return uncoverable_; }

 private:
  static std::string make_message(const std::vector<std::string>& names) {
    std::string msg = "infeasible: no portfolio reaches the threshold for";
    for (std::size_t i = 0; i < names.size(); ++i) {
      msg += (i == 0 ? " \"" : ", \"") + names[i] + "\"";
    }
    return msg;
  }
  std::vector<std::string> uncoverable_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace stridesea

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bi {

enum class ErrorKind {
  ParseError,
  IllFormed,
  AxiomNotTrue,
  EigenvariableClash,
  EigenvariableEscapes,
  Improper,
  InvalidOmegaIndex,
  IndexOutOfRange,
  UnsupportedOrientation,
  GateFailed,
  NotPi1EndSequent,
  NotBIMinus,
  NotClosedLiteral,
  InternalInconsistency,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IllFormed: return "IllFormed";
    case ErrorKind::AxiomNotTrue: return "AxiomNotTrue";
    case ErrorKind::EigenvariableClash: return "EigenvariableClash";
    case ErrorKind::EigenvariableEscapes: return "EigenvariableEscapes";
    case ErrorKind::Improper: return "Improper";
    case ErrorKind::InvalidOmegaIndex: return "InvalidOmegaIndex";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnsupportedOrientation: return "UnsupportedOrientation";
    case ErrorKind::GateFailed: return "GateFailed";
    case ErrorKind::NotPi1EndSequent: return "NotPi1EndSequent";
    case ErrorKind::NotBIMinus: return "NotBIMinus";
    case ErrorKind::NotClosedLiteral: return "NotClosedLiteral";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

// `path` is a dotted child path from the root ("" for the root itself).
// `clause` names the violated side condition where one applies.
class ProofError : public std::runtime_error {
 public:
  ProofError(ErrorKind kind, std::string message, std::string path = {},
             std::string clause = {})
      : std::runtime_error(format(kind, message, path, clause)),
        kind_(kind),
        detail_(std::move(message)),
        path_(std::move(path)),
        clause_(std::move(clause)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }
  const std::string& path() const { return path_; }
  const std::string& clause() const { return clause_; }

  ProofError at(const std::string& prefix) const {
    std::string p = prefix;
    if (!path_.empty()) p = p.empty() ? path_ : p + "." + path_;
    return ProofError(kind_, detail_, p, clause_);
  }

 private:
  static std::string format(ErrorKind kind, const std::string& message,
                            const std::string& path, const std::string& clause) {
    std::string s(to_string(kind));
    if (!clause.empty()) s += " [" + clause + "]";
    s += ": " + message;
    s += " (at " + (path.empty() ? std::string("root") : path) + ")";
    return s;
  }

  ErrorKind kind_;
  std::string detail_;
  std::string path_;
  std::string clause_;
};

inline std::string join_path(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "." + b;
}

}  // namespace bi

#pragma once

// Textual syntax for interaction systems and configurations.
//
//   system := "agents" decl ("," decl)* ";" rule*
//   decl   := IDENT "/" NAT
//   rule   := "rule" IDENT "[" terms? "]" "><" IDENT "[" terms? "]" ";"
//   config := "<" (eq ("," eq)*)? ">" ("interface" IDENT ("," IDENT)* ";")?
//   eq     := term "=" term
//   term   := IDENT ("(" terms? ")")?
//   terms  := term ("," term)*
//
// An identifier is an agent iff the signature declares it; anything else is
// a name. "#" starts a comment. On input, the aliases ⋈/⊠ for "><", ⟨ ⟩ for
// "< >" and ε δ γ for eps del gam are accepted; output is always ASCII.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "inet/core.hpp"

namespace inet {

struct SourceDocument {
  std::string origin;
  std::string text;

  static SourceDocument from_string(std::string text, std::string origin = "<input>");
  /// Throws IoError.
  static SourceDocument from_file(const std::filesystem::path& path);
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct ParseError {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string message;
  std::vector<std::string> expected;
};

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseError> errors;

  bool ok() const { return value.has_value() && errors.empty(); }
};

/// A system, a configuration, or a system followed by a configuration.
struct Document {
  std::optional<InteractionSystem> system;
  std::optional<Configuration> config;
};

/// Configurations without a preceding system are resolved against `fallback`.
ParseResult<Document> parse_document(const SourceDocument& doc, const Signature* fallback = nullptr);

/// A trailing configuration, if any, is checked but not returned.
ParseResult<InteractionSystem> parse_system(const SourceDocument& doc);

ParseResult<Configuration> parse_configuration(const SourceDocument& doc, const Signature& s);

/// "origin:line:col: error: message (expected ...)".
std::string format_error(const SourceDocument& doc, const ParseError& e);

std::string render(const Term& t, const Signature& s, const NameLabels& labels = {});
std::string render(const Configuration& c, const Signature& s);
std::string render(const Rule& r, const Signature& s);
std::string render(const InteractionSystem& sys);

}  // namespace inet

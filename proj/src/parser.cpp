#include "inet/parser.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace inet {
namespace {

enum class Tok { ident, nat, comma, semi, slash, lbracket, rbracket, lparen, rparen, langle, rangle, tie, equals, end, bad };

const char* describe(Tok t) {
  switch (t) {
    case Tok::ident:
      return "identifier";
    case Tok::nat:
      return "number";
    case Tok::comma:
      return "','";
    case Tok::semi:
      return "';'";
    case Tok::slash:
      return "'/'";
    case Tok::lbracket:
      return "'['";
    case Tok::rbracket:
      return "']'";
    case Tok::lparen:
      return "'('";
    case Tok::rparen:
      return "')'";
    case Tok::langle:
      return "'<'";
    case Tok::rangle:
      return "'>'";
    case Tok::tie:
      return "'><'";
    case Tok::equals:
      return "'='";
    case Tok::end:
      return "end of input";
    case Tok::bad:
      return "invalid character";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

const std::set<std::string, std::less<>> kKeywords = {"agents", "rule", "interface"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t line = line_, column = column_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, "", line, column});
        return out;
      }
      const char c = text_[pos_];
      if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        out.push_back({Tok::ident, text_.substr(start, pos_ - start), line, column});
        continue;
      }
      if (c >= '0' && c <= '9') {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') advance();
        out.push_back({Tok::nat, text_.substr(start, pos_ - start), line, column});
        continue;
      }
      if (static_cast<unsigned char>(c) >= 0x80) {
        out.push_back(unicode(line, column));
        continue;
      }
      advance();
      switch (c) {
        case ',':
          out.push_back({Tok::comma, ",", line, column});
          break;
        case ';':
          out.push_back({Tok::semi, ";", line, column});
          break;
        case '/':
          out.push_back({Tok::slash, "/", line, column});
          break;
        case '[':
          out.push_back({Tok::lbracket, "[", line, column});
          break;
        case ']':
          out.push_back({Tok::rbracket, "]", line, column});
          break;
        case '(':
          out.push_back({Tok::lparen, "(", line, column});
          break;
        case ')':
          out.push_back({Tok::rparen, ")", line, column});
          break;
        case '<':
          out.push_back({Tok::langle, "<", line, column});
          break;
        case '=':
          out.push_back({Tok::equals, "=", line, column});
          break;
        case '>':
          if (pos_ < text_.size() && text_[pos_] == '<') {
            advance();
            out.push_back({Tok::tie, "><", line, column});
          } else {
            out.push_back({Tok::rangle, ">", line, column});
          }
          break;
        default:
          out.push_back({Tok::bad, std::string(1, c), line, column});
          break;
      }
    }
  }

 private:
  void advance() {
    const auto byte = static_cast<unsigned char>(text_[pos_++]);
    if (byte == '\n') {
      ++line_;
      column_ = 1;
    } else if ((byte & 0xC0) != 0x80) {
      ++column_;  // count code points, not continuation bytes
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  Token unicode(std::size_t line, std::size_t column) {
    const auto lead = static_cast<unsigned char>(text_[pos_]);
    std::size_t len = lead >= 0xF0 ? 4 : lead >= 0xE0 ? 3 : lead >= 0xC0 ? 2 : 1;
    len = std::min(len, text_.size() - pos_);
    std::uint32_t cp = len == 1 ? lead : lead & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(text_[pos_ + k]) & 0x3F);
    std::string raw = text_.substr(pos_, len);
    for (std::size_t k = 0; k < len; ++k) advance();
    switch (cp) {
      case 0x22C8:  // ⋈
      case 0x22A0:  // ⊠
        return {Tok::tie, "><", line, column};
      case 0x27E8:  // ⟨
        return {Tok::langle, "<", line, column};
      case 0x27E9:  // ⟩
        return {Tok::rangle, ">", line, column};
      case 0x03B5:  // ε
        return {Tok::ident, "eps", line, column};
      case 0x03B4:  // δ
        return {Tok::ident, "del", line, column};
      case 0x03B3:  // γ
        return {Tok::ident, "gam", line, column};
      default:
        return {Tok::bad, raw, line, column};
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct SyntaxAbort {};

struct Position {
  std::size_t line;
  std::size_t column;
};

// Names of one rule or one configuration, with where each occurrence sits.
struct NameScope {
  std::map<std::string, NameId, std::less<>> ids;
  std::map<NameId, std::vector<Position>> occurrences;
  NameLabels labels;

  NameId use(const Token& t) {
    auto [it, inserted] = ids.try_emplace(t.text, NameId{static_cast<std::uint32_t>(ids.size())});
    if (inserted) labels.emplace(it->second, t.text);
    occurrences[it->second].push_back({t.line, t.column});
    return it->second;
  }
};

class Parser {
 public:
  enum class Mode { any, system_only, config_only };

  Parser(const std::string& text, const Signature* fallback, Mode mode)
      : tokens_(Lexer(text).run()), fallback_(fallback), mode_(mode) {}

  ParseResult<Document> run() {
    ParseResult<Document> result;
    try {
      Document doc;
      if (mode_ != Mode::config_only && peek_keyword("agents")) {
        doc.system = parse_system();
      } else if (mode_ == Mode::system_only) {
        fail({"'agents'"});
      }
      if (peek().kind == Tok::langle) {
        const Signature* sig = doc.system ? &doc.system->signature() : fallback_;
        if (sig == nullptr) {
          error(peek(), "configuration needs a signature: no system given");
          throw SyntaxAbort{};
        }
        doc.config = parse_config(*sig);
      } else if (!doc.system) {
        fail(mode_ == Mode::config_only ? std::vector<std::string>{"'<'"}
                                        : std::vector<std::string>{"'agents'", "'<'"});
      }
      expect(Tok::end);
      if (errors_.empty()) result.value = std::move(doc);
    } catch (const SyntaxAbort&) {
    }
    result.errors = std::move(errors_);
    return result;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::end) ++pos_;
    return t;
  }
  bool peek_keyword(std::string_view kw) const { return peek().kind == Tok::ident && peek().text == kw; }

  void error(const Token& at, std::string message, std::vector<std::string> expected = {}) {
    errors_.push_back({at.line, at.column, std::move(message), std::move(expected)});
  }
  void error(Position at, std::string message) { errors_.push_back({at.line, at.column, std::move(message), {}}); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    if (t.kind == Tok::bad) found = "invalid character '" + t.text + "'";
    error(t, "unexpected " + found, std::move(expected));
    throw SyntaxAbort{};
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail({describe(kind)});
    return next();
  }

  void expect_keyword(std::string_view kw) {
    if (!peek_keyword(kw)) fail({"'" + std::string(kw) + "'"});
    next();
  }

  InteractionSystem parse_system() {
    expect_keyword("agents");
    Signature sig;
    for (;;) {
      const Token& name = expect(Tok::ident);
      expect(Tok::slash);
      const Token& arity = expect(Tok::nat);
      if (kKeywords.contains(name.text)) {
        error(name, "'" + name.text + "' is a keyword and cannot name an agent");
      } else if (sig.find(name.text)) {
        error(name, "agent '" + name.text + "' declared twice");
      } else {
        sig.add(name.text, std::stoul(arity.text));
      }
      if (peek().kind != Tok::comma) break;
      next();
    }
    expect(Tok::semi);

    InteractionSystem sys(sig);
    std::map<RuleKey, Position> rule_at;
    while (peek_keyword("rule")) parse_rule(sys, rule_at);
    if (peek().kind == Tok::ident && peek().text != "agents") fail({"'rule'", "'<'", "end of input"});
    return sys;
  }

  std::optional<AgentId> rule_head(const Signature& sig) {
    const Token& head = expect(Tok::ident);
    auto id = sig.find(head.text);
    if (!id) error(head, "'" + head.text + "' is not a declared agent");
    return id;
  }

  std::vector<Term> rule_side(const Signature& sig, std::optional<AgentId> head, const Token& head_token,
                              NameScope& scope) {
    expect(Tok::lbracket);
    std::vector<Term> side;
    if (peek().kind != Tok::rbracket) side = parse_terms(sig, scope, Tok::rbracket);
    expect(Tok::rbracket);
    if (head && sig[*head].arity != side.size()) {
      error(head_token, "rule side for " + sig[*head].name + " has " + std::to_string(side.size()) +
                            " terms, arity " + std::to_string(sig[*head].arity));
    }
    return side;
  }

  void parse_rule(InteractionSystem& sys, std::map<RuleKey, Position>& rule_at) {
    const auto errors_before = errors_.size();
    const Token keyword = next();
    const Signature& sig = sys.signature();
    NameScope scope;

    const Token alpha_token = peek();
    auto alpha = rule_head(sig);
    auto alpha_side = rule_side(sig, alpha, alpha_token, scope);
    expect(Tok::tie);
    const Token beta_token = peek();
    auto beta = rule_head(sig);
    auto beta_side = rule_side(sig, beta, beta_token, scope);
    expect(Tok::semi);

    for (const auto& [id, where] : scope.occurrences) {
      if (where.size() != 2) {
        error(where.front(), "name '" + scope.labels.at(id) + "' occurs " + std::to_string(where.size()) +
                                 (where.size() == 1 ? " time" : " times") + " in the rule; expected exactly 2");
      }
    }
    if (errors_.size() != errors_before || !alpha || !beta) return;

    Rule rule{*alpha, std::move(alpha_side), *beta, std::move(beta_side)};
    const auto key = RuleKey::of(*alpha, *beta);
    if (auto prev = rule_at.find(key); prev != rule_at.end()) {
      error(keyword, "duplicate rule for pair {" + sig[key.first].name + "," + sig[key.second].name +
                         "}; first defined at line " + std::to_string(prev->second.line));
      return;
    }
    if (*alpha == *beta && !is_self_symmetric(rule)) {
      error(keyword, "rule for " + sig[*alpha].name + " >< " + sig[*alpha].name +
                         " is not symmetric: swapping its sides changes its meaning");
      return;
    }
    try {
      sys.add_rule(std::move(rule));
      rule_at.emplace(key, Position{keyword.line, keyword.column});
    } catch (const RuleError& e) {
      error(keyword, e.what());
    }
  }

  std::vector<Term> parse_terms(const Signature& sig, NameScope& scope, Tok closing) {
    std::vector<Term> out;
    for (;;) {
      out.push_back(parse_term(sig, scope));
      if (peek().kind == Tok::comma) {
        next();
        continue;
      }
      if (peek().kind != closing) fail({"','", describe(closing)});
      return out;
    }
  }

  Term parse_term(const Signature& sig, NameScope& scope) {
    if (peek().kind != Tok::ident) fail({"identifier"});
    const Token head = next();
    auto agent = sig.find(head.text);
    if (peek().kind == Tok::lparen) {
      next();
      std::vector<Term> args;
      if (peek().kind != Tok::rparen) args = parse_terms(sig, scope, Tok::rparen);
      expect(Tok::rparen);
      if (!agent) {
        error(head, "'" + head.text + "' is not a declared agent");
        return Term::name(scope.use(head));
      }
      check_arity(head, *agent, sig, args.size());
      return Term::agent(*agent, std::move(args));
    }
    if (agent) {
      check_arity(head, *agent, sig, 0);
      return Term::agent(*agent);
    }
    if (kKeywords.contains(head.text)) error(head, "'" + head.text + "' is a keyword and cannot be a name");
    return Term::name(scope.use(head));
  }

  void check_arity(const Token& at, AgentId id, const Signature& sig, std::size_t given) {
    if (sig[id].arity == given) return;
    error(at, sig[id].name + " applied to " + std::to_string(given) + " argument" + (given == 1 ? "" : "s") +
                  ", arity " + std::to_string(sig[id].arity));
  }

  Configuration parse_config(const Signature& sig) {
    expect(Tok::langle);
    NameScope scope;
    Configuration c;
    if (peek().kind != Tok::rangle) {
      for (;;) {
        Term lhs = parse_term(sig, scope);
        expect(Tok::equals);
        Term rhs = parse_term(sig, scope);
        c.equations.push_back({std::move(lhs), std::move(rhs)});
        if (peek().kind == Tok::comma) {
          next();
          continue;
        }
        if (peek().kind != Tok::rangle) fail({"','", "'>'"});
        break;
      }
    }
    expect(Tok::rangle);

    std::map<NameId, Position> listed;
    if (peek_keyword("interface")) {
      next();
      for (;;) {
        const Token& name = expect(Tok::ident);
        if (sig.find(name.text)) {
          error(name, "'" + name.text + "' is an agent and cannot be an interface name");
        } else if (kKeywords.contains(name.text)) {
          error(name, "'" + name.text + "' is a keyword and cannot be a name");
        } else {
          auto [it, inserted] = scope.ids.try_emplace(name.text, NameId{static_cast<std::uint32_t>(scope.ids.size())});
          if (inserted) scope.labels.emplace(it->second, name.text);
          if (!listed.emplace(it->second, Position{name.line, name.column}).second) {
            error(name, "interface name '" + name.text + "' listed twice");
          } else {
            c.interface.push_back(it->second);
            scope.occurrences[it->second];  // make sure unused interface names are counted
          }
        }
        if (peek().kind != Tok::comma) break;
        next();
      }
      expect(Tok::semi);
    }

    for (const auto& [id, where] : scope.occurrences) {
      const std::size_t count = where.size() + (listed.contains(id) ? 1 : 0);
      if (count == 2) continue;
      const Position at = where.empty() ? listed.at(id) : where.front();
      error(at, "name '" + scope.labels.at(id) + "' occurs " + std::to_string(count) +
                    (count == 1 ? " time" : " times") + "; expected exactly 2" +
                    (listed.contains(id) ? " counting the interface" : ""));
    }
    c.labels = std::move(scope.labels);
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature* fallback_;
  Mode mode_;
  std::vector<ParseError> errors_;
};

bool valid_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

// Chooses printable, collision-free surface names.
class NamePrinter {
 public:
  NamePrinter(const Signature& sig, NameLabels labels) : sig_(sig), labels_(std::move(labels)) {}

  const std::string& operator()(NameId id) {
    if (auto it = chosen_.find(id); it != chosen_.end()) return it->second;
    std::string name;
    if (auto it = labels_.find(id); it != labels_.end() && usable(it->second)) {
      name = it->second;
    } else {
      do {
        name = "x" + std::to_string(counter_++);
      } while (!usable(name));
    }
    taken_.insert(name);
    return chosen_.emplace(id, std::move(name)).first->second;
  }

  void reserve_labels(const std::vector<NameId>& ids) {
    for (auto id : ids) (*this)(id);
  }

  void term(const Term& t, std::string& out) {
    if (t.is_name()) {
      out += (*this)(t.name_id());
      return;
    }
    out += sig_.contains(t.agent_id()) ? sig_[t.agent_id()].name : "?";
    if (t.args().empty()) return;
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ", ";
      term(t.args()[i], out);
    }
    out += ')';
  }

 private:
  bool usable(const std::string& s) const {
    return valid_identifier(s) && !sig_.find(s) && !kKeywords.contains(s) && !taken_.contains(s);
  }

  const Signature& sig_;
  NameLabels labels_;
  std::map<NameId, std::string> chosen_;
  std::set<std::string> taken_;
  std::size_t counter_ = 0;
};

}  // namespace

SourceDocument SourceDocument::from_string(std::string text, std::string origin) {
  return {std::move(origin), std::move(text)};
}

SourceDocument SourceDocument::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return {path.string(), buffer.str()};
}

ParseResult<Document> parse_document(const SourceDocument& doc, const Signature* fallback) {
  return Parser(doc.text, fallback, Parser::Mode::any).run();
}

ParseResult<InteractionSystem> parse_system(const SourceDocument& doc) {
  auto parsed = Parser(doc.text, nullptr, Parser::Mode::system_only).run();
  ParseResult<InteractionSystem> out;
  out.errors = std::move(parsed.errors);
  if (parsed.value) out.value = std::move(parsed.value->system);
  return out;
}

ParseResult<Configuration> parse_configuration(const SourceDocument& doc, const Signature& s) {
  auto parsed = Parser(doc.text, &s, Parser::Mode::config_only).run();
  ParseResult<Configuration> out;
  out.errors = std::move(parsed.errors);
  if (parsed.value) out.value = std::move(parsed.value->config);
  return out;
}

std::string format_error(const SourceDocument& doc, const ParseError& e) {
  std::string out = doc.origin + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) + ": error: " + e.message;
  if (!e.expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < e.expected.size(); ++i) {
      if (i) out += i + 1 == e.expected.size() ? " or " : ", ";
      out += e.expected[i];
    }
    out += ")";
  }
  return out;
}

std::string render(const Term& t, const Signature& s, const NameLabels& labels) {
  NamePrinter names(s, labels);
  std::string out;
  names.term(t, out);
  return out;
}

std::string render(const Configuration& c, const Signature& s) {
  NamePrinter names(s, c.labels);
  names.reserve_labels(c.interface);
  std::string out = "<";
  for (std::size_t i = 0; i < c.equations.size(); ++i) {
    if (i) out += ", ";
    names.term(c.equations[i].lhs, out);
    out += " = ";
    names.term(c.equations[i].rhs, out);
  }
  out += ">";
  if (!c.interface.empty()) {
    out += " interface ";
    for (std::size_t i = 0; i < c.interface.size(); ++i) {
      if (i) out += ", ";
      out += names(c.interface[i]);
    }
    out += ";";
  }
  return out;
}

std::string render(const Rule& r, const Signature& s) {
  NamePrinter names(s, {});
  std::string out = "rule " + s[r.alpha].name + "[";
  for (std::size_t i = 0; i < r.alpha_side.size(); ++i) {
    if (i) out += ", ";
    names.term(r.alpha_side[i], out);
  }
  out += "] >< " + s[r.beta].name + "[";
  for (std::size_t i = 0; i < r.beta_side.size(); ++i) {
    if (i) out += ", ";
    names.term(r.beta_side[i], out);
  }
  out += "];";
  return out;
}

std::string render(const InteractionSystem& sys) {
  const Signature& s = sys.signature();
  std::string out = "agents ";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ", ";
    first = false;
    out += a.name + "/" + std::to_string(a.arity);
  }
  out += ";\n";
  for (const auto& [key, rule] : sys.rules()) out += render(rule, s) + "\n";
  return out;
}

}  // namespace inet

#include "cfgprint/frontend.hpp"

#include "cfgprint/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

namespace cfgprint {

namespace {

constexpr std::array<std::string_view, 18> kKeywords = {
    "if",   "elseif", "else",    "endif", "while", "endwhile",
    "for",  "to",     "endfor",  "case",  "when",  "endcase",
    "declare", "call", "output", "and",   "or",    "not"};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0)
    return 4;
  if (lead >= 0xE0)
    return 3;
  if (lead >= 0xC0)
    return 2;
  return 1;
}

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

} // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) !=
         kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    tokens.push_back({kind, std::string(source.substr(begin, end - begin)),
                      line});
  };

  while (i < n) {
    const auto c = static_cast<unsigned char>(source[i]);
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(c)) {
      ++i;
    } else if (c == '#') {
      while (i < n && source[i] != '\n')
        ++i;
    } else if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && is_ident_char(static_cast<unsigned char>(source[j])))
        ++j;
      std::string word = lowered(source.substr(i, j - i));
      if (is_keyword(word))
        tokens.push_back({TokenKind::keyword, std::move(word), line});
      else
        push(TokenKind::identifier, i, j);
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i + 1;
      while (j < n && std::isdigit(static_cast<unsigned char>(source[j])))
        ++j;
      if (j + 1 < n && source[j] == '.' &&
          std::isdigit(static_cast<unsigned char>(source[j + 1]))) {
        j += 2;
        while (j < n && std::isdigit(static_cast<unsigned char>(source[j])))
          ++j;
      }
      push(TokenKind::literal, i, j);
      i = j;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < n && source[j] != '"' && source[j] != '\n')
        ++j;
      if (j < n && source[j] == '"')
        ++j;
      push(TokenKind::literal, i, j);
      i = j;
    } else if (c == '(' || c == ')' || c == ',' || c == ';') {
      push(TokenKind::punctuation, i, i + 1);
      ++i;
    } else {
      std::size_t len = utf8_length(c);
      if (i + 1 < n) {
        const char next = source[i + 1];
        if ((next == '=' && (c == '=' || c == '!' || c == '<' || c == '>')) ||
            (c == '<' && next == '>'))
          len = 2;
      }
      len = std::min(len, n - i);
      push(TokenKind::op, i, i + len);
      i += len;
    }
  }
  return tokens;
}

std::vector<Token> Statement::condition() const {
  if (tokens.size() <= 1)
    return {};
  auto last = tokens.end();
  if (tokens.back().kind == TokenKind::punctuation && tokens.back().lexeme == ";")
    --last;
  return {tokens.begin() + 1, last};
}

//===----------------------------------------------------------------------===//
// Parser
//===----------------------------------------------------------------------===//

namespace {

class Parser {
public:
  explicit Parser(const std::vector<Token> &tokens) : toks_(tokens) {}

  Statement parse_program() {
    Statement root;
    root.kind = StmtKind::program;
    root.first_line = toks_.empty() ? 1 : toks_.front().line;
    root.body = parse_block({});
    if (!at_end())
      fail("unexpected '" + peek().lexeme + "'");
    root.last_line = toks_.empty() ? 1 : toks_.back().line;
    return root;
  }

private:
  const std::vector<Token> &toks_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token &peek() const { return toks_[pos_]; }

  std::size_t current_line() const {
    if (toks_.empty())
      return 1;
    return at_end() ? toks_.back().line : peek().line;
  }

  [[noreturn]] void fail(const std::string &message) const {
    throw SyntaxError(current_line(), message);
  }

  bool check(TokenKind kind, std::string_view lexeme = {}) const {
    if (at_end() || peek().kind != kind)
      return false;
    return lexeme.empty() || peek().lexeme == lexeme;
  }

  bool check_keyword(std::string_view kw) const {
    return check(TokenKind::keyword, kw);
  }

  bool check_any_keyword(std::initializer_list<std::string_view> kws) const {
    return std::any_of(kws.begin(), kws.end(),
                       [&](std::string_view kw) { return check_keyword(kw); });
  }

  void expect(TokenKind kind, std::string_view lexeme, const char *what) {
    if (!check(kind, lexeme))
      fail(std::string("expected ") + what +
           (at_end() ? " at end of input" : " before '" + peek().lexeme + "'"));
    ++pos_;
  }

  void expect_identifier() {
    if (!check(TokenKind::identifier))
      fail("expected identifier");
    ++pos_;
  }

  std::vector<Token> slice(std::size_t begin) const {
    return {toks_.begin() + static_cast<std::ptrdiff_t>(begin),
            toks_.begin() + static_cast<std::ptrdiff_t>(pos_)};
  }

  // --- expressions -------------------------------------------------------

  static bool is_binary_op(const Token &t) {
    if (t.kind == TokenKind::keyword)
      return t.lexeme == "and" || t.lexeme == "or";
    if (t.kind != TokenKind::op)
      return false;
    static const std::set<std::string> ops = {"+",  "-",  "*",  "/",  "%",
                                              "<",  ">",  "<=", ">=", "==",
                                              "!=", "<>", "=",  "&",  "|"};
    return ops.count(t.lexeme) > 0;
  }

  void parse_primary() {
    if (at_end())
      fail("expected expression at end of input");
    const Token &t = peek();
    if (t.kind == TokenKind::op && (t.lexeme == "-" || t.lexeme == "!")) {
      ++pos_;
      parse_primary();
      return;
    }
    if (t.kind == TokenKind::keyword && t.lexeme == "not") {
      ++pos_;
      parse_primary();
      return;
    }
    if (t.kind == TokenKind::literal || t.kind == TokenKind::identifier) {
      ++pos_;
      return;
    }
    if (t.kind == TokenKind::punctuation && t.lexeme == "(") {
      ++pos_;
      parse_expression();
      expect(TokenKind::punctuation, ")", "')'");
      return;
    }
    fail("expected expression before '" + t.lexeme + "'");
  }

  void parse_expression() {
    parse_primary();
    while (!at_end() && is_binary_op(peek())) {
      ++pos_;
      parse_primary();
    }
  }

  // --- statements --------------------------------------------------------

  std::vector<Statement>
  parse_block(std::initializer_list<std::string_view> terminators) {
    std::vector<Statement> stmts;
    while (!at_end()) {
      if (check_any_keyword(terminators))
        break;
      stmts.push_back(parse_statement());
    }
    return stmts;
  }

  void finish_simple(Statement &s, std::size_t begin) {
    expect(TokenKind::punctuation, ";", "';'");
    s.tokens = slice(begin);
    s.first_line = s.tokens.front().line;
    s.last_line = s.tokens.back().line;
  }

  void parse_end(Statement &s, std::string_view kw, std::string_view opener) {
    if (!check_keyword(kw))
      fail("missing '" + std::string(kw) + "' for '" + std::string(opener) +
           "' opened at line " + std::to_string(s.first_line));
    const std::size_t begin = pos_++;
    if (check(TokenKind::punctuation, ";"))
      ++pos_;
    s.end = slice(begin);
    s.last_line = s.end.back().line;
  }

  Statement header(StmtKind kind, std::size_t begin) {
    Statement s;
    s.kind = kind;
    s.tokens = slice(begin);
    s.first_line = s.tokens.front().line;
    s.last_line = s.tokens.back().line;
    return s;
  }

  Statement parse_statement() {
    const std::size_t begin = pos_;
    const Token &t = peek();
    Statement s;

    if (t.kind == TokenKind::identifier) {
      ++pos_;
      expect(TokenKind::op, "=", "'=' in assignment");
      parse_expression();
      s.kind = StmtKind::assign;
      finish_simple(s, begin);
      return s;
    }
    if (t.kind != TokenKind::keyword)
      fail("unexpected '" + t.lexeme + "' at start of statement");

    const std::string kw = t.lexeme;
    ++pos_;
    if (kw == "declare") {
      expect_identifier();
      if (check(TokenKind::op, "=")) {
        ++pos_;
        parse_expression();
      }
      s.kind = StmtKind::declare;
      finish_simple(s, begin);
      return s;
    }
    if (kw == "call") {
      expect_identifier();
      expect(TokenKind::punctuation, "(", "'(' after call target");
      if (!check(TokenKind::punctuation, ")")) {
        parse_expression();
        while (check(TokenKind::punctuation, ",")) {
          ++pos_;
          parse_expression();
        }
      }
      expect(TokenKind::punctuation, ")", "')'");
      s.kind = StmtKind::call;
      finish_simple(s, begin);
      return s;
    }
    if (kw == "output") {
      parse_expression();
      s.kind = StmtKind::output;
      finish_simple(s, begin);
      return s;
    }
    if (kw == "if") {
      parse_expression();
      s = header(StmtKind::if_, begin);
      s.body = parse_block({"elseif", "else", "endif"});
      bool seen_else = false;
      while (check_any_keyword({"elseif", "else"})) {
        const std::size_t alt_begin = pos_;
        const bool is_else = check_keyword("else");
        if (seen_else)
          fail("'" + peek().lexeme + "' after 'else'");
        ++pos_;
        if (!is_else)
          parse_expression();
        Statement alt =
            header(is_else ? StmtKind::else_ : StmtKind::elseif, alt_begin);
        alt.body = parse_block({"elseif", "else", "endif"});
        seen_else = is_else;
        s.alternatives.push_back(std::move(alt));
      }
      parse_end(s, "endif", "if");
      return s;
    }
    if (kw == "while") {
      parse_expression();
      s = header(StmtKind::while_, begin);
      s.body = parse_block({"endwhile"});
      parse_end(s, "endwhile", "while");
      return s;
    }
    if (kw == "for") {
      expect_identifier();
      expect(TokenKind::op, "=", "'=' in for header");
      parse_expression();
      expect(TokenKind::keyword, "to", "'to' in for header");
      parse_expression();
      s = header(StmtKind::for_, begin);
      s.body = parse_block({"endfor"});
      parse_end(s, "endfor", "for");
      return s;
    }
    if (kw == "case") {
      parse_expression();
      s = header(StmtKind::case_, begin);
      bool seen_else = false;
      while (check_any_keyword({"when", "else"})) {
        const std::size_t alt_begin = pos_;
        const bool is_else = check_keyword("else");
        if (seen_else)
          fail("'" + peek().lexeme + "' after 'else'");
        ++pos_;
        if (!is_else)
          parse_expression();
        Statement alt =
            header(is_else ? StmtKind::else_ : StmtKind::when, alt_begin);
        alt.body = parse_block({"when", "else", "endcase"});
        seen_else = is_else;
        s.alternatives.push_back(std::move(alt));
      }
      parse_end(s, "endcase", "case");
      return s;
    }
    pos_ = begin;
    fail("unexpected '" + kw + "'");
  }
};

} // namespace

Statement parse(const std::vector<Token> &tokens) {
  return Parser(tokens).parse_program();
}

//===----------------------------------------------------------------------===//
// Normalization
//===----------------------------------------------------------------------===//

namespace {

void collect_locals(const Statement &s, std::set<std::string> &locals) {
  if (s.kind == StmtKind::declare && s.tokens.size() >= 2)
    locals.insert(s.tokens[1].lexeme);
  for (const auto &child : s.body)
    collect_locals(child, locals);
  for (const auto &alt : s.alternatives)
    collect_locals(alt, locals);
}

class Normalizer {
public:
  explicit Normalizer(const Statement &root) { collect_locals(root, locals_); }

  std::vector<NormalizedStatement> run(const Statement &root) {
    emit_block(root.body);
    return std::move(out_);
  }

private:
  std::set<std::string> locals_;
  std::vector<NormalizedStatement> out_;

  std::string abstract_tokens(const std::vector<Token> &tokens) const {
    std::string text;
    for (const auto &t : tokens) {
      if (t.kind == TokenKind::punctuation && t.lexeme == ";")
        continue;
      if (!text.empty())
        text += ' ';
      switch (t.kind) {
      case TokenKind::identifier:
        text += locals_.count(t.lexeme) ? kLocalVar : kGlobalVar;
        break;
      case TokenKind::literal:
        text += kLiteral;
        break;
      default:
        text += t.lexeme;
      }
    }
    return text;
  }

  void push(std::string text, NormKind kind, ControlRole role,
            Construct construct, bool conditional) {
    NormalizedStatement ns;
    ns.text = std::move(text);
    ns.kind = kind;
    ns.role = role;
    ns.construct = construct;
    ns.conditional = conditional;
    ns.ordinal = out_.size();
    out_.push_back(std::move(ns));
  }

  void push_header(std::string_view word, const Statement &s,
                   ControlRole role, Construct construct, bool conditional) {
    std::string text(word);
    const std::string cond = abstract_tokens(s.condition());
    if (!cond.empty())
      text += ' ' + cond;
    push(std::move(text), NormKind::control, role, construct, conditional);
  }

  void emit_block(const std::vector<Statement> &stmts) {
    for (const auto &s : stmts)
      emit(s);
  }

  void emit(const Statement &s) {
    switch (s.kind) {
    case StmtKind::assign:
    case StmtKind::declare:
    case StmtKind::call:
    case StmtKind::output:
      push(abstract_tokens(s.tokens), NormKind::plain, ControlRole::none,
           Construct::none, false);
      return;
    case StmtKind::if_:
    case StmtKind::case_: {
      const bool is_if = s.kind == StmtKind::if_;
      const Construct c = is_if ? Construct::branch : Construct::dispatch;
      push_header("Selection", s, ControlRole::selection_header, c, is_if);
      emit_block(s.body);
      for (const auto &alt : s.alternatives) {
        push_header("Selection", alt, ControlRole::selection_alt, c,
                    alt.kind != StmtKind::else_);
        emit_block(alt.body);
      }
      push("End-Selection", NormKind::control_end, ControlRole::construct_end,
           c, false);
      return;
    }
    case StmtKind::while_:
    case StmtKind::for_:
      push_header("Iterate", s, ControlRole::loop_header, Construct::loop,
                  true);
      emit_block(s.body);
      push("End-Iterate", NormKind::control_end, ControlRole::construct_end,
           Construct::loop, false);
      return;
    default:
      throw Error("normalize: unexpected nested program node");
    }
  }
};

} // namespace

std::vector<NormalizedStatement> normalize(const Statement &tree) {
  return Normalizer(tree).run(tree);
}

std::vector<NormalizedStatement> normalize_source(std::string_view source) {
  return normalize(parse(tokenize(source)));
}

//===----------------------------------------------------------------------===//
// Printing
//===----------------------------------------------------------------------===//

namespace {

std::string join(const std::vector<Token> &tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto &t = tokens[i];
    const bool no_space_before =
        t.kind == TokenKind::punctuation &&
        (t.lexeme == ";" || t.lexeme == "," || t.lexeme == ")");
    if (i > 0 && !no_space_before)
      out += ' ';
    out += t.lexeme;
  }
  return out;
}

void print_block(const std::vector<Statement> &stmts, int depth,
                 const PrintStyle &style, std::ostringstream &os);

void print_statement(const Statement &s, int depth, const PrintStyle &style,
                     std::ostringstream &os) {
  const std::string pad(static_cast<std::size_t>(depth * style.indent), ' ');
  if (style.comments)
    os << pad << "# " << style.comment_text << '\n';
  os << pad << join(s.tokens) << '\n';
  print_block(s.body, depth + 1, style, os);
  for (const auto &alt : s.alternatives) {
    os << pad << join(alt.tokens) << '\n';
    print_block(alt.body, depth + 1, style, os);
  }
  if (!s.end.empty()) {
    os << pad << join(s.end);
    if (style.comments)
      os << "  # end " << style.comment_text;
    os << '\n';
  }
}

void print_block(const std::vector<Statement> &stmts, int depth,
                 const PrintStyle &style, std::ostringstream &os) {
  for (const auto &s : stmts)
    print_statement(s, depth, style, os);
}

} // namespace

std::string to_source(const Statement &tree, const PrintStyle &style) {
  std::ostringstream os;
  print_block(tree.body, 0, style, os);
  return os.str();
}

} // namespace cfgprint

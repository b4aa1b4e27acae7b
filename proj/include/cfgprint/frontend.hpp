//===----------------------------------------------------------------------===//
//
// MiniProc frontend: lexer, recursive-descent parser and the normalizer that
// turns a syntax tree into the flat abstracted statement sequence consumed by
// the CFG builder.
//
// MiniProc statements end with ';'. Control constructs are keyword
// delimited:
//
//   if <expr> ... [elseif <expr> ...]* [else ...] endif
//   while <expr> ... endwhile
//   for <ident> = <expr> to <expr> ... endfor
//   case <expr> [when <expr> ...]* [else ...] endcase
//
// plus `declare x [= expr];`, `x = expr;`, `call f(args);` and
// `output expr;`. Comments run from '#' to end of line.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cfgprint {

enum class TokenKind { keyword, identifier, literal, op, punctuation };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t line = 1;

  bool operator==(const Token &) const = default;
};

/// Splits MiniProc source into tokens. Keywords are matched
/// case-insensitively and emitted lower-case. Never fails: characters that
/// belong to no other class come back as single-character operators.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view lowered);

enum class StmtKind {
  program,
  assign,
  declare,
  call,
  output,
  if_,
  elseif,
  else_,
  while_,
  for_,
  case_,
  when,
  end_marker,
};

/// Syntax tree node. `tokens` holds the statement's own tokens (for control
/// constructs, the header line). Control constructs keep their nested
/// statements in `body`; `if` and `case` keep their `elseif`/`when`/`else`
/// arms in `alternatives`, and every construct records its closing keyword
/// in `end`.
struct Statement {
  StmtKind kind = StmtKind::program;
  std::vector<Token> tokens;
  std::vector<Statement> body;
  std::vector<Statement> alternatives;
  std::vector<Token> end;
  std::size_t first_line = 0;
  std::size_t last_line = 0;

  /// Header tokens after the leading keyword, without a trailing ';'.
  std::vector<Token> condition() const;
};

/// Builds the syntax tree. Throws SyntaxError on malformed input.
Statement parse(const std::vector<Token> &tokens);

enum class NormKind { plain, control, control_end };

enum class ControlRole {
  none,
  loop_header,
  selection_header,
  selection_alt,
  construct_end,
};

/// Which construct a control statement belongs to. Needed to tell an
/// `if` header (which branches) from a `case` header (which dispatches to its
/// first arm), since both normalize to `Selection`.
enum class Construct { none, branch, loop, dispatch };

struct NormalizedStatement {
  std::string text;
  NormKind kind = NormKind::plain;
  ControlRole role = ControlRole::none;
  Construct construct = Construct::none;
  /// Conditional headers and arms have two successors; `else` has one.
  bool conditional = false;
  std::size_t ordinal = 0;

  bool is_control() const { return kind != NormKind::plain; }
  bool operator==(const NormalizedStatement &) const = default;
};

inline constexpr int kNormalizationVersion = 1;

inline constexpr std::string_view kLocalVar = "L-Var";
inline constexpr std::string_view kGlobalVar = "G-Var";
inline constexpr std::string_view kLiteral = "LIT";

/// Flattens the tree into abstracted statements. Identifiers introduced by
/// `declare` anywhere in the program become `L-Var`, all others `G-Var`;
/// literals become `LIT`; loop headers become `Iterate <cond>` and selection
/// headers `Selection <cond>`. Construct ends are kept as control-end
/// statements.
std::vector<NormalizedStatement> normalize(const Statement &tree);

/// tokenize + parse + normalize.
std::vector<NormalizedStatement> normalize_source(std::string_view source);

struct PrintStyle {
  int indent = 2;
  bool comments = false;
  std::string comment_text = "note";
};

/// Renders a tree back to MiniProc source. Parsing the output yields a tree
/// with the same tokens.
std::string to_source(const Statement &tree, const PrintStyle &style = {});

} // namespace cfgprint

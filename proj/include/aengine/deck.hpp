#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aengine/numeric.hpp"

namespace aengine {

inline constexpr std::size_t kDefaultCapacity = 100;

/// The n of Vn.
struct VarId {
  std::size_t index = 0;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

std::string to_string(VarId v);

enum class OpCode { Add, Sub, Mul, Div };

std::string_view op_keyword(OpCode op);  // ADD, SUB, MUL, DIV
std::string_view op_symbol(OpCode op);   // +, −, ×, ÷
ArithOp to_arith(OpCode op);

/// A supplying variable. `advancing` shifts the address by (pass - 1) of the
/// innermost active repeat block enclosing the step, the way the variable
/// cards of a recurring group move on to the next column each time round.
struct Operand {
  VarId var;
  bool zero_after_read = false;
  bool advancing = false;
  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Receiver {
  VarId var;
  bool advancing = false;
  friend bool operator==(const Receiver&, const Receiver&) = default;
};

inline constexpr std::size_t kMaxReceivers = 3;

struct Step {
  std::uint32_t number = 0;
  OpCode op = OpCode::Add;
  Operand left;
  Operand right;
  std::vector<Receiver> receivers;
  std::optional<std::string> annotation;
  friend bool operator==(const Step&, const Step&) = default;
};

/// Repeat steps start..end while `counter` is nonzero, tested after `end`.
struct RepeatBlock {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  VarId counter;
  bool contains(std::uint32_t step) const { return start <= step && step <= end; }
  friend bool operator==(const RepeatBlock&, const RepeatBlock&) = default;
};

struct InputDecl {
  VarId var;
  std::optional<std::string> label;
  friend bool operator==(const InputDecl&, const InputDecl&) = default;
};

struct Preset {
  VarId var;
  Rational value;
  friend bool operator==(const Preset&, const Preset&) = default;
};

struct Deck {
  std::string name;
  std::vector<InputDecl> inputs;
  std::vector<Preset> presets;
  std::vector<Step> steps;
  std::vector<RepeatBlock> repeats;
  friend bool operator==(const Deck&, const Deck&) = default;

  const Step* find_step(std::uint32_t number) const;
};

enum class Severity { Error, Warning };

enum class DiagnosticKind {
  StepNumbering,
  ReceiverCount,
  DuplicateReceiver,
  RepeatRange,
  RepeatOverlap,
  DuplicateRepeat,
  InputPresetOverlap,
  DuplicateDeclaration,
  VarOutOfRange,
  AdvancingOutsideRepeat,
};

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagnosticKind kind = DiagnosticKind::StepNumbering;
  std::optional<std::uint32_t> step;
  std::optional<std::size_t> line;
  std::string message;
};

std::string to_string(const Diagnostic& d);

/// Line numbers of parsed directives; lets diagnostics point back at text.
struct SourceMap {
  std::vector<std::size_t> step_lines;  // parallel to Deck::steps
  std::vector<std::size_t> repeat_lines;
  std::vector<std::size_t> input_lines;
  std::vector<std::size_t> preset_lines;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& message);
  std::size_t line;
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  std::vector<Diagnostic> diagnostics;
};

/// Empty iff the deck satisfies every structural invariant. `capacity` bounds
/// the variable indices; pass SIZE_MAX to skip that check.
std::vector<Diagnostic> validate_deck(const Deck& deck, std::size_t capacity = kDefaultCapacity,
                                      const SourceMap* source = nullptr);

/// Parses `.deck` text. Throws ParseError on syntax, ValidationError on
/// structural violations. Variable capacity is not checked here.
Deck parse_deck(std::string_view text, SourceMap* source = nullptr);

/// Canonical text: parse_deck(serialize_deck(d)) == d.
std::string serialize_deck(const Deck& deck);

enum class Mutation { SubAdd, SwapOperands };

struct NoSuchStep : std::out_of_range {
  explicit NoSuchStep(std::uint32_t step);
};

struct InapplicableMutation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Copy of `deck` with exactly one step altered.
Deck mutate_flip_operation(const Deck& deck, std::uint32_t step_number, Mutation mutation);

}  // namespace aengine

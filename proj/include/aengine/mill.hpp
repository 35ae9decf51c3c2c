#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aengine/deck.hpp"
#include "aengine/numeric.hpp"

namespace aengine {

/// A store column: its value and how many times it has received one (the
/// superscript r of ^rVk).
struct VarState {
  Rational value;
  std::uint64_t revision = 0;
  friend bool operator==(const VarState&, const VarState&) = default;
};

class Store {
 public:
  explicit Store(std::size_t capacity = kDefaultCapacity);

  std::size_t capacity() const { return cells_.size(); }
  const VarState& at(VarId v) const;
  VarState& at(VarId v);

  /// Preset or input binding: sets the value and bumps the revision.
  void bind(VarId v, Rational value);

  const std::vector<VarState>& cells() const { return cells_; }
  friend bool operator==(const Store&, const Store&) = default;

 private:
  std::vector<VarState> cells_;
};

struct OperandRecord {
  VarId var;
  std::uint64_t revision = 0;
  Rational value;
  bool zeroed = false;
  friend bool operator==(const OperandRecord&, const OperandRecord&) = default;
};

struct ReceiverRecord {
  VarId var;
  std::uint64_t revision = 0;  // after receiving
  friend bool operator==(const ReceiverRecord&, const ReceiverRecord&) = default;
};

/// Active repeat block (index into Deck::repeats) and its 1-based pass.
struct PassFrame {
  std::size_t block = 0;
  std::uint64_t iteration = 1;
  friend bool operator==(const PassFrame&, const PassFrame&) = default;
};

struct TraceRow {
  std::uint64_t ordinal = 0;
  std::uint32_t step_number = 0;
  std::vector<PassFrame> pass_stack;
  OpCode op = OpCode::Add;
  std::array<OperandRecord, 2> operands;
  std::vector<ReceiverRecord> receivers;
  Rational result;
  std::optional<std::string> annotation;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct RunLimits {
  std::uint64_t max_executed_steps = 1'000'000;
};

struct RunResult {
  Store final_store;
  std::vector<TraceRow> trace;
  std::uint64_t steps_executed = 0;
};

using Bindings = std::map<VarId, Rational>;

// Runtime failures. Each carries the locus it can name.

struct ExecutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnboundInput : ExecutionError {
  explicit UnboundInput(VarId v);
  VarId var;
};

struct DivisionByZeroAtStep : ExecutionError {
  DivisionByZeroAtStep(std::uint32_t step, std::uint64_t ordinal);
  std::uint32_t step;
  std::uint64_t ordinal;
};

struct NonIntegerCounter : ExecutionError {
  NonIntegerCounter(const RepeatBlock& block, const Rational& value);
  RepeatBlock block;
};

struct LoopLimitExceeded : ExecutionError {
  explicit LoopLimitExceeded(std::uint64_t limit);
};

struct AddressOutOfRange : ExecutionError {
  AddressOutOfRange(std::uint32_t step, std::size_t address, std::size_t capacity);
};

/// Executes one step against the store. `advance` is added to the index of
/// every advancing reference. Returns the trace row (ordinal and pass stack
/// left for the caller). Throws DivisionByZeroAtStep with ordinal 0.
TraceRow apply_step(Store& store, const Step& step, std::size_t advance = 0);

/// Runs `deck` to completion. Throws ValidationError if the deck is invalid
/// for a store of `capacity`, or an ExecutionError.
RunResult execute(const Deck& deck, const Bindings& bindings, const RunLimits& limits = {},
                  std::size_t capacity = kDefaultCapacity);

/// The six-column table, with the repetition note after every jump back.
std::string render_trace_table(const std::vector<TraceRow>& trace, const Deck& deck);

/// JSON Lines, one record per row, stable field order.
std::string trace_to_records(const std::vector<TraceRow>& trace);

struct TraceFormatError : std::runtime_error {
  TraceFormatError(std::size_t line, const std::string& message);
};

std::vector<TraceRow> trace_from_records(std::string_view text);

/// `^rVk`
std::string render_var(VarId v, std::uint64_t revision);

}  // namespace aengine

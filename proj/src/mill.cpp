#include "aengine/mill.hpp"

#include <algorithm>

namespace aengine {

Store::Store(std::size_t capacity) : cells_(capacity) {}

const VarState& Store::at(VarId v) const { return cells_.at(v.index); }
VarState& Store::at(VarId v) { return cells_.at(v.index); }

void Store::bind(VarId v, Rational value) {
  VarState& cell = at(v);
  cell.value = std::move(value);
  ++cell.revision;
}

UnboundInput::UnboundInput(VarId v)
    : ExecutionError("input " + to_string(v) + " has no binding"), var(v) {}

DivisionByZeroAtStep::DivisionByZeroAtStep(std::uint32_t s, std::uint64_t o)
    : ExecutionError("division by zero at step " + std::to_string(s) + " (execution " +
                     std::to_string(o) + ")"),
      step(s),
      ordinal(o) {}

NonIntegerCounter::NonIntegerCounter(const RepeatBlock& b, const Rational& value)
    : ExecutionError("counter " + to_string(b.counter) + " of repeat " + std::to_string(b.start) +
                     ".." + std::to_string(b.end) + " holds " + value.str() +
                     ", not a nonnegative integer"),
      block(b) {}

LoopLimitExceeded::LoopLimitExceeded(std::uint64_t limit)
    : ExecutionError("step limit of " + std::to_string(limit) + " executed steps exceeded") {}

AddressOutOfRange::AddressOutOfRange(std::uint32_t step, std::size_t address, std::size_t capacity)
    : ExecutionError("step " + std::to_string(step) + " addresses V" + std::to_string(address) +
                     " beyond the store (capacity " + std::to_string(capacity) + ")") {}

namespace {

VarId resolve(VarId base, bool advancing, std::size_t advance, const Store& store,
              std::uint32_t step) {
  const std::size_t address = advancing ? base.index + advance : base.index;
  if (address >= store.capacity()) throw AddressOutOfRange(step, address, store.capacity());
  return VarId{address};
}

}  // namespace

TraceRow apply_step(Store& store, const Step& step, std::size_t advance) {
  TraceRow row;
  row.step_number = step.number;
  row.op = step.op;
  row.annotation = step.annotation;

  const Operand* ops[2] = {&step.left, &step.right};
  for (int i = 0; i < 2; ++i) {
    const VarId v = resolve(ops[i]->var, ops[i]->advancing, advance, store, step.number);
    const VarState& cell = store.at(v);
    row.operands[i] = {v, cell.revision, cell.value, ops[i]->zero_after_read};
  }

  try {
    row.result = rat_arith(to_arith(step.op), row.operands[0].value, row.operands[1].value);
  } catch (const DivisionByZero&) {
    throw DivisionByZeroAtStep(step.number, 0);
  }

  std::vector<VarId> targets;
  targets.reserve(step.receivers.size());
  for (const auto& r : step.receivers) {
    targets.push_back(resolve(r.var, r.advancing, advance, store, step.number));
  }

  // Giving off happens before receiving, so a variable that both supplies
  // with '!' and receives ends up holding the result.
  for (const auto& o : row.operands) {
    if (o.zeroed) store.at(o.var).value = Rational();
  }
  for (const VarId v : targets) {
    VarState& cell = store.at(v);
    cell.value = row.result;
    ++cell.revision;
    row.receivers.push_back({v, cell.revision});
  }
  return row;
}

RunResult execute(const Deck& deck, const Bindings& bindings, const RunLimits& limits,
                  std::size_t capacity) {
  if (auto diags = validate_deck(deck, capacity); !diags.empty()) {
    throw ValidationError(std::move(diags));
  }
  for (const auto& [v, value] : bindings) {
    if (v.index >= capacity) {
      throw ValidationError({{Severity::Error, DiagnosticKind::VarOutOfRange, std::nullopt,
                              std::nullopt,
                              "binding for " + to_string(v) + " is outside the store"}});
    }
  }

  RunResult result{Store(capacity), {}, 0};
  Store& store = result.final_store;
  for (const auto& in : deck.inputs) {
    if (!bindings.contains(in.var)) throw UnboundInput(in.var);
  }
  for (const auto& p : deck.presets) {
    if (!bindings.contains(p.var)) store.bind(p.var, p.value);
  }
  for (const auto& [v, value] : bindings) store.bind(v, value);

  // Blocks that open at a step, outermost first.
  std::vector<std::size_t> order(deck.repeats.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = deck.repeats[a];
    const auto& y = deck.repeats[b];
    if (x.start != y.start) return x.start < y.start;
    return x.end > y.end;
  });

  std::vector<PassFrame> stack;
  auto on_stack = [&](std::size_t block) {
    return std::any_of(stack.begin(), stack.end(),
                       [block](const PassFrame& f) { return f.block == block; });
  };

  std::size_t pc = 0;
  while (pc < deck.steps.size()) {
    const Step& step = deck.steps[pc];
    while (!stack.empty() && !deck.repeats[stack.back().block].contains(step.number)) {
      stack.pop_back();
    }
    for (const std::size_t b : order) {
      if (deck.repeats[b].start == step.number && !on_stack(b)) stack.push_back({b, 1});
    }

    if (result.steps_executed >= limits.max_executed_steps) {
      throw LoopLimitExceeded(limits.max_executed_steps);
    }
    const std::size_t advance = stack.empty() ? 0 : stack.back().iteration - 1;
    const std::uint64_t ordinal = result.steps_executed + 1;
    TraceRow row;
    try {
      row = apply_step(store, step, advance);
    } catch (const DivisionByZeroAtStep&) {
      throw DivisionByZeroAtStep(step.number, ordinal);
    }
    row.ordinal = ordinal;
    row.pass_stack = stack;
    result.trace.push_back(std::move(row));
    ++result.steps_executed;

    // Test counters of blocks ending here, innermost first.
    bool jumped = false;
    while (!stack.empty() && deck.repeats[stack.back().block].end == step.number) {
      PassFrame& frame = stack.back();
      const RepeatBlock& block = deck.repeats[frame.block];
      const Rational& counter = store.at(block.counter).value;
      if (!counter.is_integer() || counter.sign() < 0) throw NonIntegerCounter(block, counter);
      if (!counter.is_zero()) {
        ++frame.iteration;
        pc = block.start - 1;
        jumped = true;
        break;
      }
      stack.pop_back();
    }
    if (!jumped) ++pc;
  }
  return result;
}

std::string render_var(VarId v, std::uint64_t revision) {
  return "^" + std::to_string(revision) + "V" + std::to_string(v.index);
}

}  // namespace aengine

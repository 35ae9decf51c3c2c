#include "aengine/deck.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <sstream>

namespace aengine {

std::string to_string(VarId v) { return "V" + std::to_string(v.index); }

std::string_view op_keyword(OpCode op) {
  switch (op) {
    case OpCode::Add: return "ADD";
    case OpCode::Sub: return "SUB";
    case OpCode::Mul: return "MUL";
    case OpCode::Div: return "DIV";
  }
  return "?";
}

std::string_view op_symbol(OpCode op) {
  switch (op) {
    case OpCode::Add: return "+";
    case OpCode::Sub: return "−";
    case OpCode::Mul: return "×";
    case OpCode::Div: return "÷";
  }
  return "?";
}

ArithOp to_arith(OpCode op) {
  switch (op) {
    case OpCode::Add: return ArithOp::Add;
    case OpCode::Sub: return ArithOp::Sub;
    case OpCode::Mul: return ArithOp::Mul;
    case OpCode::Div: return ArithOp::Div;
  }
  return ArithOp::Add;
}

const Step* Deck::find_step(std::uint32_t number) const {
  auto it = std::find_if(steps.begin(), steps.end(),
                         [number](const Step& s) { return s.number == number; });
  return it == steps.end() ? nullptr : &*it;
}

std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  os << (d.severity == Severity::Error ? "error" : "warning");
  if (d.line) os << " (line " << *d.line << ")";
  if (d.step) os << " [step " << *d.step << "]";
  os << ": " << d.message;
  return os.str();
}

ParseError::ParseError(std::size_t line_no, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + message), line(line_no) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out = "invalid deck";
  for (const auto& d : diags) {
    out += "\n  ";
    out += to_string(d);
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_diagnostics(diags)), diagnostics(std::move(diags)) {}

NoSuchStep::NoSuchStep(std::uint32_t step)
    : std::out_of_range("no step numbered " + std::to_string(step)) {}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate_deck(const Deck& deck, std::size_t capacity,
                                      const SourceMap* source) {
  std::vector<Diagnostic> out;
  auto step_line = [&](std::size_t pos) -> std::optional<std::size_t> {
    if (source && pos < source->step_lines.size()) return source->step_lines[pos];
    return std::nullopt;
  };
  auto repeat_line = [&](std::size_t pos) -> std::optional<std::size_t> {
    if (source && pos < source->repeat_lines.size()) return source->repeat_lines[pos];
    return std::nullopt;
  };
  auto add = [&](DiagnosticKind kind, std::optional<std::uint32_t> step,
                 std::optional<std::size_t> line, std::string msg) {
    out.push_back({Severity::Error, kind, step, line, std::move(msg)});
  };
  auto check_var = [&](VarId v, std::optional<std::uint32_t> step, std::optional<std::size_t> line,
                       const char* role) {
    if (v.index >= capacity) {
      add(DiagnosticKind::VarOutOfRange, step, line,
          std::string(role) + " " + to_string(v) + " is outside the store (capacity " +
              std::to_string(capacity) + ")");
    }
  };

  for (std::size_t i = 0; i < deck.inputs.size(); ++i) {
    auto line = source && i < source->input_lines.size() ? std::optional(source->input_lines[i])
                                                         : std::nullopt;
    check_var(deck.inputs[i].var, std::nullopt, line, "input");
    for (std::size_t j = 0; j < i; ++j) {
      if (deck.inputs[j].var == deck.inputs[i].var) {
        add(DiagnosticKind::DuplicateDeclaration, std::nullopt, line,
            "input " + to_string(deck.inputs[i].var) + " declared twice");
      }
    }
  }
  for (std::size_t i = 0; i < deck.presets.size(); ++i) {
    auto line = source && i < source->preset_lines.size()
                    ? std::optional(source->preset_lines[i])
                    : std::nullopt;
    const VarId v = deck.presets[i].var;
    check_var(v, std::nullopt, line, "preset");
    for (std::size_t j = 0; j < i; ++j) {
      if (deck.presets[j].var == v) {
        add(DiagnosticKind::DuplicateDeclaration, std::nullopt, line,
            "preset " + to_string(v) + " declared twice");
      }
    }
    for (const auto& in : deck.inputs) {
      if (in.var == v) {
        add(DiagnosticKind::InputPresetOverlap, std::nullopt, line,
            to_string(v) + " is both an input and a preset");
      }
    }
  }

  auto inside_some_repeat = [&](std::uint32_t number) {
    return std::any_of(deck.repeats.begin(), deck.repeats.end(),
                       [number](const RepeatBlock& b) { return b.contains(number); });
  };

  for (std::size_t i = 0; i < deck.steps.size(); ++i) {
    const Step& s = deck.steps[i];
    const auto line = step_line(i);
    if (s.number != i + 1) {
      add(DiagnosticKind::StepNumbering, s.number, line,
          "step numbered " + std::to_string(s.number) + " at position " + std::to_string(i + 1) +
              "; steps must be numbered 1, 2, 3, ... without gaps");
    }
    if (s.receivers.empty() || s.receivers.size() > kMaxReceivers) {
      add(DiagnosticKind::ReceiverCount, s.number, line,
          "a step needs 1 to 3 receivers, found " + std::to_string(s.receivers.size()));
    }
    for (std::size_t a = 0; a < s.receivers.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        if (s.receivers[a] == s.receivers[b]) {
          add(DiagnosticKind::DuplicateReceiver, s.number, line,
              "receiver " + to_string(s.receivers[a].var) + " listed twice");
        }
      }
    }
    check_var(s.left.var, s.number, line, "operand");
    check_var(s.right.var, s.number, line, "operand");
    for (const auto& r : s.receivers) check_var(r.var, s.number, line, "receiver");

    const bool advancing = s.left.advancing || s.right.advancing ||
                           std::any_of(s.receivers.begin(), s.receivers.end(),
                                       [](const Receiver& r) { return r.advancing; });
    if (advancing && !inside_some_repeat(s.number)) {
      add(DiagnosticKind::AdvancingOutsideRepeat, s.number, line,
          "advancing variable used outside any repeat block");
    }
  }

  const auto n_steps = static_cast<std::uint32_t>(deck.steps.size());
  for (std::size_t i = 0; i < deck.repeats.size(); ++i) {
    const RepeatBlock& b = deck.repeats[i];
    const auto line = repeat_line(i);
    if (b.start < 1 || b.start > b.end || b.end > n_steps) {
      add(DiagnosticKind::RepeatRange, std::nullopt, line,
          "repeat " + std::to_string(b.start) + ".." + std::to_string(b.end) +
              " does not name a range of existing steps");
    }
    check_var(b.counter, std::nullopt, line, "counter");
    for (std::size_t j = 0; j < i; ++j) {
      const RepeatBlock& o = deck.repeats[j];
      if (o.start == b.start && o.end == b.end) {
        add(DiagnosticKind::DuplicateRepeat, std::nullopt, line,
            "repeat " + std::to_string(b.start) + ".." + std::to_string(b.end) +
                " declared twice");
        continue;
      }
      const bool disjoint = b.end < o.start || o.end < b.start;
      const bool nested = (o.start <= b.start && b.end <= o.end) ||
                          (b.start <= o.start && o.end <= b.end);
      if (!disjoint && !nested) {
        add(DiagnosticKind::RepeatOverlap, std::nullopt, line,
            "repeat " + std::to_string(b.start) + ".." + std::to_string(b.end) +
                " partially overlaps repeat " + std::to_string(o.start) + ".." +
                std::to_string(o.end));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t begin = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > begin) out.push_back(s.substr(begin, i - begin));
  }
  return out;
}

/// Text after the first whitespace-delimited token, trimmed.
std::string_view rest_after_keyword(std::string_view line, std::size_t n_tokens) {
  std::size_t i = 0;
  for (std::size_t t = 0; t < n_tokens; ++t) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  }
  return trim(line.substr(i));
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  std::uint64_t number(std::string_view tok, const char* what) const {
    if (tok.empty() || tok.size() > 18 ||
        !std::all_of(tok.begin(), tok.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      fail(std::string("expected ") + what + ", found '" + std::string(tok) + "'");
    }
    return std::stoull(std::string(tok));
  }

  struct VarToken {
    VarId var;
    bool advancing = false;
    bool zero_after_read = false;
  };

  VarToken var(std::string_view tok, bool allow_bang, bool allow_advance) const {
    const std::string original(tok);
    if (tok.size() < 2 || tok.front() != 'V') fail("expected variable V<k>, found '" + original + "'");
    tok.remove_prefix(1);
    VarToken out;
    if (!tok.empty() && tok.back() == '!') {
      if (!allow_bang) fail("'!' is only allowed on operands: '" + original + "'");
      out.zero_after_read = true;
      tok.remove_suffix(1);
    }
    if (!tok.empty() && tok.back() == '+') {
      if (!allow_advance) fail("'+' is not allowed here: '" + original + "'");
      out.advancing = true;
      tok.remove_suffix(1);
    }
    out.var = VarId{static_cast<std::size_t>(number(tok, "variable index"))};
    return out;
  }

  OpCode op(std::string_view tok) const {
    if (tok == "ADD") return OpCode::Add;
    if (tok == "SUB") return OpCode::Sub;
    if (tok == "MUL") return OpCode::Mul;
    if (tok == "DIV") return OpCode::Div;
    fail("unknown operation '" + std::string(tok) + "' (expected ADD, SUB, MUL or DIV)");
  }

  void expect(std::string_view tok, std::string_view want) const {
    if (tok != want) {
      fail("expected '" + std::string(want) + "', found '" + std::string(tok) + "'");
    }
  }

 private:
  std::size_t line_;
};

std::uint32_t to_step_number(const LineParser& p, std::uint64_t v) {
  if (v > UINT32_MAX) p.fail("step number too large");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

Deck parse_deck(std::string_view text, SourceMap* source) {
  SourceMap local;
  SourceMap& map = source ? *source : local;
  map = SourceMap{};

  Deck deck;
  enum class State { BeforeDeck, InDeck, AfterEnd } state = State::BeforeDeck;
  std::uint32_t last_step = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == ';') continue;

    const LineParser p(line_no);
    const auto head = split_ws(line.substr(0, line.find(';')));
    const std::string_view kw = head.empty() ? std::string_view{} : head.front();

    if (state == State::AfterEnd) p.fail("content after END");
    if (state == State::BeforeDeck) {
      if (kw != "DECK") p.fail("expected 'DECK <name>' before any other directive");
      const auto name = rest_after_keyword(line, 1);
      if (name.empty()) p.fail("DECK needs a name");
      deck.name = std::string(name);
      state = State::InDeck;
      continue;
    }

    if (kw == "DECK") {
      p.fail("duplicate DECK directive");
    } else if (kw == "END") {
      if (head.size() != 1) p.fail("END takes no arguments");
      state = State::AfterEnd;
    } else if (kw == "INPUT") {
      const auto toks = split_ws(line);
      if (toks.size() < 2) p.fail("INPUT needs a variable");
      InputDecl in;
      in.var = p.var(toks[1], false, false).var;
      const auto label = rest_after_keyword(line, 2);
      if (!label.empty()) in.label = std::string(label);
      deck.inputs.push_back(std::move(in));
      map.input_lines.push_back(line_no);
    } else if (kw == "SET") {
      const auto toks = split_ws(line);
      if (toks.size() != 4) p.fail("expected 'SET V<k> = <number>'");
      Preset pr;
      pr.var = p.var(toks[1], false, false).var;
      p.expect(toks[2], "=");
      try {
        pr.value = Rational::parse(toks[3]);
      } catch (const std::exception& e) {
        p.fail(e.what());
      }
      deck.presets.push_back(std::move(pr));
      map.preset_lines.push_back(line_no);
    } else if (kw == "STEP") {
      Step s;
      const auto semi = line.find(';');
      if (semi != std::string_view::npos) {
        const auto ann = trim(line.substr(semi + 1));
        if (!ann.empty()) s.annotation = std::string(ann);
      }
      const auto& toks = head;
      if (toks.size() < 6) p.fail("expected 'STEP <i> <OP> <opnd> <opnd> -> V<a> ...'");
      s.number = to_step_number(p, p.number(toks[1], "step number"));
      if (s.number <= last_step) {
        p.fail("step " + std::to_string(s.number) + " appears after step " +
               std::to_string(last_step) + "; steps must be in increasing order");
      }
      last_step = s.number;
      s.op = p.op(toks[2]);
      const auto l = p.var(toks[3], true, true);
      const auto r = p.var(toks[4], true, true);
      s.left = {l.var, l.zero_after_read, l.advancing};
      s.right = {r.var, r.zero_after_read, r.advancing};
      p.expect(toks[5], "->");
      for (std::size_t i = 6; i < toks.size(); ++i) {
        const auto v = p.var(toks[i], false, true);
        s.receivers.push_back({v.var, v.advancing});
      }
      deck.steps.push_back(std::move(s));
      map.step_lines.push_back(line_no);
    } else if (kw == "REPEAT") {
      const auto& toks = head;
      if (toks.size() != 7) p.fail("expected 'REPEAT <start> <end> UNTIL V<c> = 0'");
      RepeatBlock b;
      b.start = to_step_number(p, p.number(toks[1], "start step"));
      b.end = to_step_number(p, p.number(toks[2], "end step"));
      p.expect(toks[3], "UNTIL");
      b.counter = p.var(toks[4], false, false).var;
      p.expect(toks[5], "=");
      p.expect(toks[6], "0");
      deck.repeats.push_back(b);
      map.repeat_lines.push_back(line_no);
    } else {
      p.fail("unknown directive '" + std::string(kw) + "'");
    }
  }
  if (state == State::BeforeDeck) throw ParseError(line_no, "no DECK directive found");
  if (state != State::AfterEnd) throw ParseError(line_no, "missing END");

  auto diags = validate_deck(deck, SIZE_MAX, &map);
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return deck;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string render_operand(const Operand& o) {
  std::string s = to_string(o.var);
  if (o.advancing) s += '+';
  if (o.zero_after_read) s += '!';
  return s;
}

std::string render_receiver(const Receiver& r) {
  std::string s = to_string(r.var);
  if (r.advancing) s += '+';
  return s;
}

}  // namespace

std::string serialize_deck(const Deck& deck) {
  std::ostringstream os;
  os << "DECK " << deck.name << '\n';
  for (const auto& in : deck.inputs) {
    os << "INPUT " << to_string(in.var);
    if (in.label) os << ' ' << *in.label;
    os << '\n';
  }
  for (const auto& pr : deck.presets) os << "SET " << to_string(pr.var) << " = " << pr.value << '\n';
  for (const auto& s : deck.steps) {
    os << "STEP " << s.number << ' ' << op_keyword(s.op) << ' ' << render_operand(s.left) << ' '
       << render_operand(s.right) << " ->";
    for (const auto& r : s.receivers) os << ' ' << render_receiver(r);
    if (s.annotation) os << " ; " << *s.annotation;
    os << '\n';
  }
  for (const auto& b : deck.repeats) {
    os << "REPEAT " << b.start << ' ' << b.end << " UNTIL " << to_string(b.counter) << " = 0\n";
  }
  os << "END\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Mutation

Deck mutate_flip_operation(const Deck& deck, std::uint32_t step_number, Mutation mutation) {
  Deck out = deck;
  auto it = std::find_if(out.steps.begin(), out.steps.end(),
                         [step_number](const Step& s) { return s.number == step_number; });
  if (it == out.steps.end()) throw NoSuchStep(step_number);

  switch (mutation) {
    case Mutation::SubAdd:
      if (it->op == OpCode::Sub) {
        it->op = OpCode::Add;
      } else if (it->op == OpCode::Add) {
        it->op = OpCode::Sub;
      } else {
        throw InapplicableMutation("sub-add flip needs an ADD or SUB step; step " +
                                   std::to_string(step_number) + " is " +
                                   std::string(op_keyword(it->op)));
      }
      break;
    case Mutation::SwapOperands:
      if (it->left == it->right) {
        throw InapplicableMutation("step " + std::to_string(step_number) +
                                   " has identical operands; swapping changes nothing");
      }
      std::swap(it->left, it->right);
      break;
  }
  return out;
}

}  // namespace aengine

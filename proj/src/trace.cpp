#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "aengine/mill.hpp"

namespace aengine {

namespace {

// Display width in code points; every glyph we emit is single-width.
std::size_t width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void pad(std::ostream& os, std::string_view s, std::size_t w) {
  os << s;
  for (std::size_t i = width(s); i < w; ++i) os << ' ';
}

using Row = std::array<std::string, 6>;

Row table_cells(const TraceRow& row) {
  Row cells;
  cells[0] = std::to_string(row.step_number);
  cells[1] = std::string(op_symbol(row.op));

  const auto& a = row.operands[0];
  const auto& b = row.operands[1];
  cells[2] = render_var(a.var, a.revision) + " " + std::string(op_symbol(row.op)) + " " +
             render_var(b.var, b.revision);

  for (std::size_t i = 0; i < row.receivers.size(); ++i) {
    if (i > 0) cells[3] += ", ";
    cells[3] += render_var(row.receivers[i].var, row.receivers[i].revision);
  }

  for (std::size_t i = 0; i < row.operands.size(); ++i) {
    const auto& o = row.operands[i];
    if (i == 1 && o.var == a.var) break;
    if (i > 0) cells[4] += "; ";
    cells[4] += render_var(o.var, o.revision) + " = ";
    auto recv = std::find_if(row.receivers.begin(), row.receivers.end(),
                             [&](const ReceiverRecord& r) { return r.var == o.var; });
    if (recv != row.receivers.end()) {
      cells[4] += render_var(o.var, recv->revision);
    } else if (o.zeroed) {
      cells[4] += "0";
    } else {
      cells[4] += render_var(o.var, o.revision);
    }
  }

  cells[5] = row.annotation ? *row.annotation + " [" + row.result.str() + "]" : row.result.str();
  return cells;
}

}  // namespace

std::string render_trace_table(const std::vector<TraceRow>& trace, const Deck& deck) {
  const Row header = {"Number of Operation",         "Nature of Operation",
                      "Variables acted upon",        "Variables receiving results",
                      "Indication of change",        "Statement of Results"};
  std::vector<Row> rows;
  rows.reserve(trace.size());
  for (const auto& r : trace) rows.push_back(table_cells(r));

  std::array<std::size_t, 6> widths{};
  for (std::size_t c = 0; c < 6; ++c) widths[c] = width(header[c]);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < 6; ++c) widths[c] = std::max(widths[c], width(r[c]));
  }

  std::ostringstream os;
  auto emit = [&](const Row& r) {
    for (std::size_t c = 0; c < 6; ++c) {
      if (c > 0) os << " | ";
      if (c == 5) {
        os << r[c];
      } else {
        pad(os, r[c], widths[c]);
      }
    }
    os << '\n';
  };
  emit(header);
  std::size_t rule = 3 * 5;
  for (auto w : widths) rule += w;
  os << std::string(rule, '-') << '\n';

  for (std::size_t i = 0; i < trace.size(); ++i) {
    emit(rows[i]);
    if (i + 1 == trace.size()) continue;
    const auto from = trace[i].step_number;
    const auto to = trace[i + 1].step_number;
    if (to > from) continue;
    auto block = std::find_if(deck.repeats.begin(), deck.repeats.end(),
                              [&](const RepeatBlock& b) { return b.start == to && b.end == from; });
    if (block != deck.repeats.end()) {
      os << "Here follows a repetition of Operations " << block->start << " to " << block->end
         << ".\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON Lines

std::string trace_to_records(const std::vector<TraceRow>& trace) {
  using nlohmann::ordered_json;
  std::string out;
  for (const auto& row : trace) {
    ordered_json j;
    j["ordinal"] = row.ordinal;
    j["step_number"] = row.step_number;
    ordered_json stack = ordered_json::array();
    for (const auto& f : row.pass_stack) {
      stack.push_back(ordered_json{{"block", f.block}, {"iteration", f.iteration}});
    }
    j["pass_stack"] = std::move(stack);
    j["op_symbol"] = std::string(op_symbol(row.op));
    ordered_json operands = ordered_json::array();
    for (const auto& o : row.operands) {
      operands.push_back(ordered_json{{"var", o.var.index},
                                      {"revision", o.revision},
                                      {"value", o.value.str()},
                                      {"zeroed", o.zeroed}});
    }
    j["operands"] = std::move(operands);
    ordered_json receivers = ordered_json::array();
    for (const auto& r : row.receivers) {
      receivers.push_back(ordered_json{{"var", r.var.index}, {"revision", r.revision}});
    }
    j["receivers"] = std::move(receivers);
    j["result"] = row.result.str();
    j["annotation"] = row.annotation ? ordered_json(*row.annotation) : ordered_json(nullptr);
    out += j.dump();
    out += '\n';
  }
  return out;
}

TraceFormatError::TraceFormatError(std::size_t line, const std::string& message)
    : std::runtime_error("trace line " + std::to_string(line) + ": " + message) {}

namespace {

OpCode op_from_symbol(const std::string& s) {
  for (OpCode op : {OpCode::Add, OpCode::Sub, OpCode::Mul, OpCode::Div}) {
    if (op_symbol(op) == s) return op;
  }
  throw std::invalid_argument("unknown op_symbol '" + s + "'");
}

}  // namespace

std::vector<TraceRow> trace_from_records(std::string_view text) {
  std::vector<TraceRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      TraceRow row;
      row.ordinal = j.at("ordinal").get<std::uint64_t>();
      row.step_number = j.at("step_number").get<std::uint32_t>();
      for (const auto& f : j.at("pass_stack")) {
        row.pass_stack.push_back(
            {f.at("block").get<std::size_t>(), f.at("iteration").get<std::uint64_t>()});
      }
      row.op = op_from_symbol(j.at("op_symbol").get<std::string>());
      const auto& ops = j.at("operands");
      if (!ops.is_array() || ops.size() != 2) throw std::invalid_argument("expected two operands");
      for (std::size_t i = 0; i < 2; ++i) {
        row.operands[i] = {VarId{ops[i].at("var").get<std::size_t>()},
                           ops[i].at("revision").get<std::uint64_t>(),
                           Rational::parse(ops[i].at("value").get<std::string>()),
                           ops[i].at("zeroed").get<bool>()};
      }
      for (const auto& r : j.at("receivers")) {
        row.receivers.push_back(
            {VarId{r.at("var").get<std::size_t>()}, r.at("revision").get<std::uint64_t>()});
      }
      row.result = Rational::parse(j.at("result").get<std::string>());
      if (const auto& a = j.at("annotation"); !a.is_null()) row.annotation = a.get<std::string>();
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw TraceFormatError(line_no, e.what());
    }
  }
  return rows;
}

}  // namespace aengine

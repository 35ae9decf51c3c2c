#include <algorithm>
#include <random>

#include "doctest.h"

#include "aengine/deck.hpp"
#include "aengine/programs.hpp"
#include "deck_gen.hpp"

using namespace aengine;

namespace {

bool has_kind(const std::vector<Diagnostic>& diags, DiagnosticKind kind) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.kind == kind; });
}

std::vector<Diagnostic> validation_failure(const std::string& text) {
  try {
    parse_deck(text);
  } catch (const ValidationError& e) {
    return e.diagnostics;
  }
  FAIL("expected ValidationError");
  return {};
}

std::size_t parse_failure_line(const std::string& text) {
  try {
    parse_deck(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  FAIL("expected ParseError");
  return 0;
}

}  // namespace

TEST_CASE("minimal deck") {
  const Deck d = parse_deck("DECK tiny\nSTEP 1 ADD V1 V2 -> V3\nEND\n");
  CHECK(d.name == "tiny");
  REQUIRE(d.steps.size() == 1);
  CHECK(d.repeats.empty());
  const Step& s = d.steps[0];
  CHECK(s.number == 1);
  CHECK(s.op == OpCode::Add);
  CHECK(s.left == Operand{VarId{1}, false, false});
  CHECK(s.right == Operand{VarId{2}, false, false});
  CHECK(s.receivers == std::vector<Receiver>{{VarId{3}, false}});
  CHECK_FALSE(s.annotation.has_value());
}

TEST_CASE("full grammar") {
  const std::string text =
      "; a comment\n"
      "  DECK  sample deck  \n"
      "INPUT V1 first value\n"
      "INPUT V2\n"
      "SET V0 = -3/6\n"
      "\n"
      "REPEAT 13 23 UNTIL V10 = 0\n"
      "STEP 1 MUL V2! V1 -> V4 V5 V6 ; = 2n\n";
  std::string steps;
  for (int i = 2; i <= 23; ++i) steps += "STEP " + std::to_string(i) + " SUB V4 V1 -> V4\n";
  const Deck d = parse_deck(text + steps + "END\n; trailing comment\n");
  CHECK(d.name == "sample deck");
  REQUIRE(d.inputs.size() == 2);
  CHECK(d.inputs[0].label == "first value");
  CHECK_FALSE(d.inputs[1].label.has_value());
  REQUIRE(d.presets.size() == 1);
  CHECK(d.presets[0].value == Rational(-1, 2));
  REQUIRE(d.repeats.size() == 1);
  CHECK(d.repeats[0] == RepeatBlock{13, 23, VarId{10}});
  CHECK(d.steps[0].left.zero_after_read);
  CHECK(d.steps[0].receivers.size() == 3);
  CHECK(d.steps[0].annotation == "= 2n");
  CHECK(d.steps.size() == 23);
}

TEST_CASE("advancing references") {
  const Deck d = parse_deck(
      "DECK adv\nSTEP 1 ADD V1+ V2+! -> V3+ V4\nREPEAT 1 1 UNTIL V0 = 0\nEND\n");
  const Step& s = d.steps[0];
  CHECK(s.left.advancing);
  CHECK_FALSE(s.left.zero_after_read);
  CHECK(s.right.advancing);
  CHECK(s.right.zero_after_read);
  CHECK(s.receivers[0].advancing);
  CHECK_FALSE(s.receivers[1].advancing);

  const auto diags = validation_failure("DECK adv\nSTEP 1 ADD V1+ V2 -> V3\nEND\n");
  CHECK(has_kind(diags, DiagnosticKind::AdvancingOutsideRepeat));
  CHECK(parse_failure_line("DECK adv\nSTEP 1 ADD V1 V2 -> V3!\nEND\n") == 2);
}

TEST_CASE("parse errors carry the line") {
  CHECK(parse_failure_line("") == 1);
  CHECK(parse_failure_line("STEP 1 ADD V1 V2 -> V3\n") == 1);
  CHECK(parse_failure_line("DECK x\nSTEP 1 ADD V1 V2 -> V3\n") == 3);
  CHECK(parse_failure_line("DECK x\nSTEP 1 POW V1 V2 -> V3\nEND\n") == 2);
  CHECK(parse_failure_line("DECK x\n\nSTEP 1 ADD V1 V2 V3\nEND\n") == 3);
  CHECK(parse_failure_line("DECK x\nSTEP 1 ADD X1 V2 -> V3\nEND\n") == 2);
  CHECK(parse_failure_line("DECK x\nSTEP 2 ADD V1 V2 -> V3\nSTEP 1 ADD V1 V2 -> V3\nEND\n") == 3);
  CHECK(parse_failure_line("DECK x\nSET V1 = 1/0\nSTEP 1 ADD V1 V2 -> V3\nEND\n") == 2);
  CHECK(parse_failure_line("DECK x\nSET V1 = abc\nSTEP 1 ADD V1 V2 -> V3\nEND\n") == 2);
  CHECK(parse_failure_line("DECK x\nREPEAT 1 1 WHILE V1 = 0\nSTEP 1 ADD V1 V2 -> V3\nEND\n") == 2);
  CHECK(parse_failure_line("DECK x\nSTEP 1 ADD V1 V2 -> V3\nEND\nSTEP 2 ADD V1 V2 -> V3\n") == 4);
  CHECK(parse_failure_line("DECK x\nDECK y\nEND\n") == 2);
  CHECK(parse_failure_line("DECK\nEND\n") == 1);
  CHECK(parse_failure_line("DECK x\nFOO\nEND\n") == 2);
}

TEST_CASE("structural violations") {
  SUBCASE("gap in numbering") {
    const auto diags = validation_failure(
        "DECK x\nSTEP 1 ADD V1 V2 -> V3\nSTEP 2 ADD V1 V2 -> V3\nSTEP 4 ADD V1 V2 -> V3\nEND\n");
    REQUIRE(has_kind(diags, DiagnosticKind::StepNumbering));
    CHECK(diags[0].step == 4u);
    CHECK(diags[0].line == 4u);
  }
  SUBCASE("first step is not 1") {
    CHECK(has_kind(validation_failure("DECK x\nSTEP 2 ADD V1 V2 -> V3\nEND\n"),
                   DiagnosticKind::StepNumbering));
  }
  SUBCASE("no steps") {
    // An empty program is still a program; nothing to number.
    CHECK(parse_deck("DECK x\nEND\n").steps.empty());
  }
  SUBCASE("duplicate receiver") {
    const auto diags = validation_failure("DECK x\nSTEP 1 ADD V1 V2 -> V3 V3\nEND\n");
    REQUIRE(has_kind(diags, DiagnosticKind::DuplicateReceiver));
    CHECK(diags[0].step == 1u);
    CHECK(diags[0].line == 2u);
    CHECK(diags[0].severity == Severity::Error);
  }
  SUBCASE("receiver count") {
    CHECK(has_kind(validation_failure("DECK x\nSTEP 1 ADD V1 V2 ->\nEND\n"),
                   DiagnosticKind::ReceiverCount));
    CHECK(has_kind(validation_failure("DECK x\nSTEP 1 ADD V1 V2 -> V3 V4 V5 V6\nEND\n"),
                   DiagnosticKind::ReceiverCount));
  }
  SUBCASE("overlapping repeats") {
    std::string text = "DECK x\n";
    for (int i = 1; i <= 12; ++i) text += "STEP " + std::to_string(i) + " ADD V1 V2 -> V3\n";
    text += "REPEAT 5 10 UNTIL V4 = 0\nREPEAT 8 12 UNTIL V5 = 0\nEND\n";
    const auto diags = validation_failure(text);
    REQUIRE(has_kind(diags, DiagnosticKind::RepeatOverlap));
    const auto it = std::find_if(diags.begin(), diags.end(), [](const Diagnostic& d) {
      return d.kind == DiagnosticKind::RepeatOverlap;
    });
    CHECK(it->line == 15u);
  }
  SUBCASE("nested and shared-end repeats are fine") {
    std::string text = "DECK x\n";
    for (int i = 1; i <= 12; ++i) text += "STEP " + std::to_string(i) + " ADD V1 V2 -> V3\n";
    text += "REPEAT 5 10 UNTIL V4 = 0\nREPEAT 6 10 UNTIL V5 = 0\nREPEAT 1 12 UNTIL V6 = 0\nEND\n";
    CHECK(parse_deck(text).repeats.size() == 3);
  }
  SUBCASE("repeat range") {
    CHECK(has_kind(validation_failure("DECK x\nSTEP 1 ADD V1 V2 -> V3\nREPEAT 1 2 UNTIL V4 = 0\nEND\n"),
                   DiagnosticKind::RepeatRange));
    CHECK(has_kind(validation_failure("DECK x\nSTEP 1 ADD V1 V2 -> V3\nSTEP 2 ADD V1 V2 -> V3\n"
                                      "REPEAT 2 1 UNTIL V4 = 0\nEND\n"),
                   DiagnosticKind::RepeatRange));
  }
  SUBCASE("duplicate repeat") {
    CHECK(has_kind(validation_failure("DECK x\nSTEP 1 ADD V1 V2 -> V3\nREPEAT 1 1 UNTIL V4 = 0\n"
                                      "REPEAT 1 1 UNTIL V5 = 0\nEND\n"),
                   DiagnosticKind::DuplicateRepeat));
  }
  SUBCASE("inputs and presets disjoint") {
    CHECK(has_kind(validation_failure("DECK x\nINPUT V1\nSET V1 = 2\nSTEP 1 ADD V1 V2 -> V3\nEND\n"),
                   DiagnosticKind::InputPresetOverlap));
    CHECK(has_kind(validation_failure("DECK x\nINPUT V1\nINPUT V1\nSTEP 1 ADD V1 V2 -> V3\nEND\n"),
                   DiagnosticKind::DuplicateDeclaration));
  }
}

TEST_CASE("capacity is checked by validate_deck, not the parser") {
  const Deck d = parse_deck("DECK x\nSTEP 1 ADD V1 V2 -> V150\nEND\n");
  CHECK(validate_deck(d, SIZE_MAX).empty());
  const auto diags = validate_deck(d);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].kind == DiagnosticKind::VarOutOfRange);
  CHECK(validate_deck(d, 151).empty());
}

TEST_CASE("shipped decks are clean") {
  CHECK(validate_deck(note_d_deck()).empty());
  CHECK(validate_deck(note_g_cycle_deck(4)).empty());
  CHECK(validate_deck(note_g_full_deck(10)).empty());
  CHECK(validate_deck(prime_poly_deck(40), prime_poly_capacity(40)).empty());
}

TEST_CASE("serialize round trips") {
  for (const Deck& d : {note_d_deck(), note_g_cycle_deck(4), note_g_full_deck(10), prime_poly_deck(40)}) {
    const std::string text = serialize_deck(d);
    CHECK(parse_deck(text) == d);
    CHECK(serialize_deck(d) == text);
    CHECK(serialize_deck(parse_deck(text)) == text);
  }
  for (const auto& shipped : shipped_decks()) {
    CAPTURE(shipped.name);
    CHECK(serialize_deck(parse_deck(shipped.text)) == shipped.text);
  }
}

TEST_CASE("serialization is canonical") {
  const Deck a = parse_deck(
      "DECK x\nREPEAT 1 2 UNTIL V0 = 0\nSET V5 = 4/8\n  STEP 1 ADD V1 V2 -> V3   ;  note  \n"
      "INPUT V1   label  \nSTEP 2 SUB V3! V1 -> V3\nEND\n");
  CHECK(serialize_deck(a) ==
        "DECK x\nINPUT V1 label\nSET V5 = 1/2\nSTEP 1 ADD V1 V2 -> V3 ; note\n"
        "STEP 2 SUB V3! V1 -> V3\nREPEAT 1 2 UNTIL V0 = 0\nEND\n");
}

TEST_CASE("property: random valid decks round trip") {
  std::mt19937_64 gen(20240611);
  for (int i = 0; i < 300; ++i) {
    const Deck d = testing::random_valid_deck(gen);
    REQUIRE(validate_deck(d).empty());
    const std::string text = serialize_deck(d);
    const Deck back = parse_deck(text);
    REQUIRE(back == d);
    REQUIRE(serialize_deck(back) == text);
  }
}

TEST_CASE("property: repeats in valid decks form a forest") {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 300; ++i) {
    const Deck d = testing::random_valid_deck(gen);
    for (const auto& a : d.repeats) {
      for (const auto& b : d.repeats) {
        const bool disjoint = a.end < b.start || b.end < a.start;
        const bool a_in_b = b.start <= a.start && a.end <= b.end;
        const bool b_in_a = a.start <= b.start && b.end <= a.end;
        REQUIRE((disjoint || a_in_b || b_in_a));
      }
    }
  }
}

TEST_CASE("mutate_flip_operation") {
  const Deck original = note_g_cycle_deck(4);

  SUBCASE("SUB to ADD at step 6") {
    const Deck m = mutate_flip_operation(original, 6, Mutation::SubAdd);
    CHECK(original == note_g_cycle_deck(4));
    REQUIRE(m.steps.size() == original.steps.size());
    for (std::size_t i = 0; i < m.steps.size(); ++i) {
      if (m.steps[i].number == 6) {
        CHECK(m.steps[i].op == OpCode::Add);
        CHECK(m.steps[i].left == original.steps[i].left);
        CHECK(m.steps[i].right == original.steps[i].right);
      } else {
        CHECK(m.steps[i] == original.steps[i]);
      }
    }
    CHECK(m.repeats == original.repeats);
    CHECK(m.inputs == original.inputs);
    CHECK(m.presets == original.presets);
    CHECK(mutate_flip_operation(m, 6, Mutation::SubAdd) == original);
  }
  SUBCASE("swap operands on a SUB step") {
    const Deck m = mutate_flip_operation(original, 2, Mutation::SwapOperands);
    CHECK(m.steps[1].op == OpCode::Sub);
    CHECK(m.steps[1].left == original.steps[1].right);
    CHECK(m.steps[1].right == original.steps[1].left);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(mutate_flip_operation(original, 99, Mutation::SubAdd), NoSuchStep);
    CHECK_THROWS_AS(mutate_flip_operation(original, 0, Mutation::SubAdd), NoSuchStep);
    // step 1 is MUL
    CHECK_THROWS_AS(mutate_flip_operation(original, 1, Mutation::SubAdd), InapplicableMutation);
    const Deck same = parse_deck("DECK x\nSTEP 1 ADD V1 V1 -> V3\nEND\n");
    CHECK_THROWS_AS(mutate_flip_operation(same, 1, Mutation::SwapOperands), InapplicableMutation);
  }
}

#include <algorithm>
#include <random>

#include "doctest.h"

#include "aengine/bernoulli.hpp"
#include "aengine/programs.hpp"

using namespace aengine;

namespace {

LinearSystem2x2 sys(long long m, long long n, long long d, long long m2, long long n2, long long d2) {
  return {Rational(m), Rational(n), Rational(d), Rational(m2), Rational(n2), Rational(d2)};
}

Bindings cycle_bindings(std::uint32_t n) {
  Bindings b;
  const auto prev = eq8_sequence(n - 1);
  for (std::size_t k = 0; k < prev.size(); ++k) b[VarId{21 + k}] = prev[k];
  return b;
}

std::size_t count_step(const RunResult& r, std::uint32_t step) {
  return static_cast<std::size_t>(std::count_if(
      r.trace.begin(), r.trace.end(), [&](const TraceRow& row) { return row.step_number == step; }));
}

}  // namespace

TEST_CASE("solve_2x2_reference") {
  CHECK(solve_2x2_reference(sys(1, 1, 3, 1, -1, 1)) == std::pair(Rational(2), Rational(1)));
  CHECK(solve_2x2_reference(sys(1, 0, 5, 0, 1, 7)) == std::pair(Rational(5), Rational(7)));
  CHECK_THROWS_AS(solve_2x2_reference(sys(1, 1, 1, 2, 2, 2)), SingularSystem);
}

TEST_CASE("Note D deck") {
  const Deck d = note_d_deck();
  CHECK(d.steps.size() == 11);
  CHECK(d.repeats.empty());
  CHECK(d.inputs.size() == 6);
  const auto ops = [&](OpCode op) {
    return std::count_if(d.steps.begin(), d.steps.end(), [&](const Step& s) { return s.op == op; });
  };
  CHECK(ops(OpCode::Mul) == 6);
  CHECK(ops(OpCode::Sub) == 3);
  CHECK(ops(OpCode::Div) == 2);
  CHECK(ops(OpCode::Add) == 0);

  const auto r = execute(d, note_d_bindings(sys(1, 1, 3, 1, -1, 1)));
  CHECK(r.final_store.at(kNoteDx).value == Rational(2));
  CHECK(r.final_store.at(kNoteDy).value == Rational(1));

  try {
    execute(d, note_d_bindings(sys(1, 1, 1, 2, 2, 2)));
    FAIL("expected DivisionByZeroAtStep");
  } catch (const DivisionByZeroAtStep& e) {
    CHECK(e.step == 10);
    CHECK(d.find_step(e.step)->op == OpCode::Div);
  }
}

TEST_CASE("property: Note D agrees with the closed formulas") {
  std::mt19937_64 gen(1843);
  int solved = 0;
  while (solved < 100) {
    auto c = [&] { return static_cast<long long>(gen() % 19) - 9; };
    const auto s = sys(c(), c(), c(), c(), c(), c());
    if ((s.m * s.n2 - s.m2 * s.n).is_zero()) continue;
    const auto r = execute(note_d_deck(), note_d_bindings(s));
    const auto [x, y] = solve_2x2_reference(s);
    REQUIRE(r.final_store.at(kNoteDx).value == x);
    REQUIRE(r.final_store.at(kNoteDy).value == y);
    // and the solution satisfies both equations
    CHECK(s.m * x + s.n * y == s.d);
    CHECK(s.m2 * x + s.n2 * y == s.d2);
    ++solved;
  }
}

TEST_CASE("Note G layout") {
  const auto layout = note_g_layout(10);
  CHECK(layout.data_vars == std::vector<VarId>{{1}, {2}, {3}});
  CHECK(layout.result_count == 10);
  const auto in_working = [&](VarId v) {
    return layout.working_first <= v && v <= layout.working_last;
  };
  for (const auto& v : layout.data_vars) CHECK_FALSE(in_working(v));
  CHECK(layout.working_last < layout.result_first);
  CHECK_FALSE(in_working(layout.zero));
  CHECK(in_working(layout.counter_var));
  CHECK(layout.result(9).index < kDefaultCapacity);
}

TEST_CASE("Note G cycle deck structure") {
  const Deck d = note_g_cycle_deck(4);
  CHECK(d.steps.size() == 25);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;
  for (const auto& b : d.repeats) ranges.emplace_back(b.start, b.end);
  std::sort(ranges.begin(), ranges.end());
  CHECK(ranges == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{13, 16}, {13, 23}, {17, 20}});
  CHECK(d.find_step(25)->annotation == "= n + 1");
  CHECK(d.find_step(1)->receivers.size() == 3);
  for (std::uint32_t n = 1; n <= 12; ++n) CHECK(note_g_cycle_deck(n).steps.size() == 25);
}

TEST_CASE("Note G cycle deck results") {
  SUBCASE("n = 4") {
    const Bindings b = {{VarId{21}, Rational(1, 6)}, {VarId{22}, Rational(-1, 30)},
                        {VarId{23}, Rational(1, 42)}};
    const auto r = execute(note_g_cycle_deck(4), b);
    CHECK(r.final_store.at(VarId{24}).value == Rational(-1, 30));
    CHECK(count_step(r, 23) == 2);
    CHECK(r.final_store.at(VarId{3}).value == Rational(5));
  }
  SUBCASE("n = 1") {
    const auto r = execute(note_g_cycle_deck(1), {});
    CHECK(r.final_store.at(VarId{21}).value == Rational(1, 6));
  }
  SUBCASE("n = 2") {
    const auto r = execute(note_g_cycle_deck(2), cycle_bindings(2));
    CHECK(r.final_store.at(VarId{22}).value == Rational(-1, 30));
  }
  SUBCASE("n = 3") {
    const auto r = execute(note_g_cycle_deck(3), {{VarId{21}, Rational(1, 6)}, {VarId{22}, Rational(-1, 30)}});
    CHECK(r.final_store.at(VarId{23}).value == Rational(1, 42));
    CHECK(count_step(r, 23) == 1);
  }
  SUBCASE("n = 3..12: n - 2 passes, eq8 result") {
    for (std::uint32_t n = 3; n <= 12; ++n) {
      CAPTURE(n);
      const auto r = execute(note_g_cycle_deck(n), cycle_bindings(n));
      CHECK(count_step(r, 23) == n - 2);
      CHECK(r.final_store.at(VarId{20 + n}).value == eq8_sequence(n).back());
    }
  }
  SUBCASE("step 12 and step 23 values at n = 4") {
    const auto r = execute(note_g_cycle_deck(4), cycle_bindings(4));
    std::vector<Rational> s23;
    for (const auto& row : r.trace) {
      if (row.step_number == 12) CHECK(row.result == Rational(2));
      if (row.step_number == 23) s23.push_back(row.result);
    }
    CHECK(s23 == std::vector<Rational>{Rational(1), Rational(0)});
  }
}

TEST_CASE("Note G full deck") {
  CHECK(note_g_results(execute(note_g_full_deck(1), {}).final_store, 1) ==
        std::vector<Rational>{Rational(1, 6)});
  CHECK(note_g_results(execute(note_g_full_deck(4), {}).final_store, 4) ==
        std::vector<Rational>{Rational(1, 6), Rational(-1, 30), Rational(1, 42), Rational(-1, 30)});

  const auto r10 = execute(note_g_full_deck(10), {});
  const auto results = note_g_results(r10.final_store, 10);
  CHECK(results == eq8_sequence(10));
  const std::vector<Rational> expected = {
      Rational(1, 6),         Rational(-1, 30),     Rational(1, 42),        Rational(-1, 30),
      Rational(5, 66),        Rational(-691, 2730), Rational(7, 6),         Rational(-3617, 510),
      Rational(43867, 798),   Rational(-174611, 330)};
  CHECK(results == expected);
  CHECK(r10.steps_executed < 10000);

  for (std::uint32_t n_max = 1; n_max <= 10; ++n_max) {
    const auto r = execute(note_g_full_deck(n_max), {});
    const auto got = note_g_results(r.final_store, n_max);
    for (std::uint32_t k = 1; k <= n_max; ++k) CHECK(got[k - 1] == bernoulli_modern(2 * k));
    CHECK(r.final_store.at(kNoteGCountVar).value == Rational(0));
    CHECK(r.final_store.at(kNoteGRunningN).value == Rational(n_max + 1));
  }

  // Overriding the cycle count reproduces a shorter run.
  const auto r4 = execute(note_g_full_deck(10), {{kNoteGCountVar, Rational(4)}});
  CHECK(note_g_results(r4.final_store, 4) == note_g_results(execute(note_g_full_deck(4), {}).final_store, 4));
  CHECK(r4.final_store.at(VarId{25}).value == Rational(0));
}

TEST_CASE("prime polynomial") {
  const Deck d = prime_poly_deck(40);
  REQUIRE(d.repeats.size() == 1);
  const auto& loop = d.repeats[0];
  for (const auto& s : d.steps) {
    if (loop.contains(s.number)) CHECK(s.op != OpCode::Mul);
    CHECK(s.op != OpCode::Div);
  }

  const auto r = execute(d, {}, {}, prime_poly_capacity(40));
  const auto values = prime_results(r.final_store, 40);
  REQUIRE(values.size() == 40);
  CHECK(values.front() == Rational(41));
  CHECK(values.back() == Rational(1601));
  for (long long x = 0; x < 40; ++x) {
    const Rational& v = values[static_cast<std::size_t>(x)];
    CHECK(v == Rational(x * x + x + 41));
    CHECK(is_prime_trial(static_cast<std::uint64_t>(x * x + x + 41)));
  }

  CHECK(prime_results(execute(prime_poly_deck(1), {}, {}, prime_poly_capacity(1)).final_store, 1) ==
        std::vector<Rational>{Rational(41)});
  const auto r41 = execute(prime_poly_deck(41), {}, {}, prime_poly_capacity(41));
  CHECK(prime_results(r41.final_store, 41).back() == Rational(1681));
  CHECK_FALSE(is_prime_trial(1681));
}

TEST_CASE("is_prime_trial") {
  CHECK(is_prime_trial(41));
  CHECK(is_prime_trial(1601));
  CHECK_FALSE(is_prime_trial(1));
  CHECK(is_prime_trial(2));
  CHECK(is_prime_trial(3));
  CHECK_FALSE(is_prime_trial(4));
  CHECK_FALSE(is_prime_trial(0));
  CHECK_FALSE(is_prime_trial(1681));  // 41^2
  CHECK(is_prime_trial(2147483647ULL));
  CHECK_FALSE(is_prime_trial(4294967297ULL));  // 641 * 6700417
}

TEST_CASE("shipped decks match their constructors") {
  const auto& decks = shipped_decks();
  CHECK(decks.size() == 4);
  for (const auto& sd : decks) {
    CAPTURE(sd.name);
    CHECK(sd.text == serialize_deck(shipped_deck_constructor(sd.name)));
    CHECK(parse_deck(sd.text) == shipped_deck_constructor(sd.name));
    CHECK(sd.file_name == std::string(sd.name) + ".deck");
    CHECK(&shipped_deck(sd.name) == &sd);
  }
  CHECK_THROWS_AS(shipped_deck("nope"), std::out_of_range);
  CHECK_THROWS_AS(shipped_deck_constructor("nope"), std::out_of_range);
}

#include "aengine/programs.hpp"

#include <string>

namespace aengine {

namespace {

Operand v(std::size_t k) { return Operand{VarId{k}, false, false}; }
Operand given_off(std::size_t k) { return Operand{VarId{k}, true, false}; }
Operand stepping(std::size_t k) { return Operand{VarId{k}, false, true}; }
Receiver to(std::size_t k) { return Receiver{VarId{k}, false}; }
Receiver to_stepping(std::size_t k) { return Receiver{VarId{k}, true}; }

void add_step(Deck& deck, OpCode op, Operand left, Operand right, std::vector<Receiver> receivers,
              std::string annotation) {
  Step s;
  s.number = static_cast<std::uint32_t>(deck.steps.size() + 1);
  s.op = op;
  s.left = left;
  s.right = right;
  s.receivers = std::move(receivers);
  s.annotation = std::move(annotation);
  deck.steps.push_back(std::move(s));
}

constexpr auto ADD = OpCode::Add;
constexpr auto SUB = OpCode::Sub;
constexpr auto MUL = OpCode::Mul;
constexpr auto DIV = OpCode::Div;

struct NoteGVariant {
  std::size_t n_var = 3;          // column holding n
  bool counter_is_n = false;      // step 12 yields n rather than n - 2
  Receiver result = to(21);       // receiver of step 24
  std::string result_label;
};

// Steps 1..25 of the table. Column roles:
//   V0 zero, V1 = 1, V2 = 2, V(n_var) = n
//   V4, V5, V6  2n and its derived factors      V7  running divisor
//   V8, V9      the two factor-group quotients   V10 (13,23) counter
//   V11 current coefficient A                    V12 product B . A
//   V13 accumulated sum of the equation          V21.. Bernoulli numbers
void add_note_g_cycle(Deck& deck, const NoteGVariant& g) {
  const std::size_t n = g.n_var;
  add_step(deck, MUL, v(2), v(n), {to(4), to(5), to(6)}, "= 2n");
  add_step(deck, SUB, v(4), v(1), {to(4)}, "= 2n - 1");
  add_step(deck, ADD, v(5), v(1), {to(5)}, "= 2n + 1");
  add_step(deck, DIV, given_off(4), given_off(5), {to(11)}, "= (2n - 1)/(2n + 1)");
  add_step(deck, DIV, v(11), v(2), {to(11)}, "= 1/2 . (2n - 1)/(2n + 1)");
  add_step(deck, SUB, v(0), given_off(11), {to(13)}, "= -1/2 . (2n - 1)/(2n + 1) = A0");
  add_step(deck, SUB, v(n), v(1), {to(10)}, "= n - 1");
  add_step(deck, ADD, v(2), v(0), {to(7)}, "= 2 + 0 = 2");
  add_step(deck, DIV, v(6), v(7), {to(11)}, "= 2n/2 = A1");
  add_step(deck, MUL, v(21), v(11), {to(12)}, "= B1 . 2n/2 = B1 A1");
  add_step(deck, ADD, given_off(12), v(13), {to(13)}, "= A0 + B1 A1");
  if (g.counter_is_n) {
    add_step(deck, ADD, v(10), v(1), {to(10)}, "= n");
  } else {
    add_step(deck, SUB, v(10), v(1), {to(10)}, "= n - 2");
  }
  add_step(deck, SUB, v(6), v(1), {to(6)}, "= 2n - 1");
  add_step(deck, ADD, v(1), v(7), {to(7)}, "= 2 + 1 = 3");
  add_step(deck, DIV, v(6), v(7), {to(8)}, "= (2n - 1)/3");
  add_step(deck, MUL, given_off(8), v(11), {to(11)}, "= 2n/2 . (2n - 1)/3");
  add_step(deck, SUB, v(6), v(1), {to(6)}, "= 2n - 2");
  add_step(deck, ADD, v(1), v(7), {to(7)}, "= 3 + 1 = 4");
  add_step(deck, DIV, v(6), v(7), {to(9)}, "= (2n - 2)/4");
  add_step(deck, MUL, given_off(9), v(11), {to(11)}, "= 2n/2 . (2n - 1)/3 . (2n - 2)/4 = A3");
  add_step(deck, MUL, stepping(22), v(11), {to(12)}, "= B3 A3");
  add_step(deck, ADD, given_off(12), v(13), {to(13)}, "= A0 + B1 A1 + B3 A3");
  add_step(deck, SUB, v(10), v(1), {to(10)}, "= n - 3");
  add_step(deck, SUB, v(0), given_off(13), {g.result}, g.result_label);
  add_step(deck, ADD, v(1), v(n), {to(n)}, "= n + 1");

  deck.repeats.push_back({13, 23, VarId{10}});
  deck.repeats.push_back({13, 16, VarId{0}});
  deck.repeats.push_back({17, 20, VarId{0}});
}

}  // namespace

// ---------------------------------------------------------------------------

std::pair<Rational, Rational> solve_2x2_reference(const LinearSystem2x2& s) {
  const Rational det = s.m * s.n2 - s.m2 * s.n;
  if (det.is_zero()) throw SingularSystem();
  return {(s.d * s.n2 - s.d2 * s.n) / det, (s.d2 * s.m - s.d * s.m2) / det};
}

Deck note_d_deck() {
  Deck deck;
  deck.name = "note_d";
  const char* labels[] = {"m", "n", "d", "m'", "n'", "d'"};
  for (std::size_t i = 0; i < 6; ++i) deck.inputs.push_back({VarId{i}, std::string(labels[i])});

  add_step(deck, MUL, v(0), v(4), {to(6)}, "= mn'");
  add_step(deck, MUL, v(3), v(1), {to(7)}, "= m'n");
  add_step(deck, MUL, v(2), v(4), {to(8)}, "= dn'");
  add_step(deck, MUL, v(5), v(1), {to(9)}, "= d'n");
  add_step(deck, MUL, v(5), v(0), {to(10)}, "= d'm");
  add_step(deck, MUL, v(2), v(3), {to(11)}, "= dm'");
  add_step(deck, SUB, given_off(6), given_off(7), {to(12)}, "= mn' - m'n");
  add_step(deck, SUB, given_off(8), given_off(9), {to(13)}, "= dn' - d'n");
  add_step(deck, SUB, given_off(10), given_off(11), {to(14)}, "= d'm - dm'");
  add_step(deck, DIV, given_off(13), v(12), {to(15)}, "= (dn' - d'n)/(mn' - m'n) = x");
  add_step(deck, DIV, given_off(14), given_off(12), {to(16)}, "= (d'm - dm')/(mn' - m'n) = y");
  return deck;
}

Bindings note_d_bindings(const LinearSystem2x2& s) {
  return {{VarId{0}, s.m}, {VarId{1}, s.n},  {VarId{2}, s.d},
          {VarId{3}, s.m2}, {VarId{4}, s.n2}, {VarId{5}, s.d2}};
}

NoteGLayout note_g_layout(std::size_t result_count) {
  NoteGLayout layout;
  layout.result_count = result_count;
  return layout;
}

Deck note_g_cycle_deck(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("note_g_cycle_deck requires n >= 1");
  Deck deck;
  deck.name = "note_g_cycle n=" + std::to_string(n);
  for (std::uint32_t k = 1; k < n; ++k) {
    deck.inputs.push_back({VarId{20 + k}, "B" + std::to_string(2 * k - 1)});
  }
  deck.presets = {{VarId{0}, Rational(0)},
                  {VarId{1}, Rational(1)},
                  {VarId{2}, Rational(2)},
                  {VarId{3}, Rational(static_cast<long long>(n))}};

  NoteGVariant g;
  g.counter_is_n = n <= 2;
  g.result = to(20 + n);
  g.result_label = "= B" + std::to_string(2 * n - 1);
  add_note_g_cycle(deck, g);
  return deck;
}

Deck note_g_full_deck(std::uint32_t n_max) {
  if (n_max == 0) throw std::invalid_argument("note_g_full_deck requires n_max >= 1");
  Deck deck;
  deck.name = "note_g_full";
  deck.presets = {{VarId{0}, Rational(0)},
                  {VarId{1}, Rational(1)},
                  {VarId{2}, Rational(2)},
                  {kNoteGCountVar, Rational(static_cast<long long>(n_max))},
                  {kNoteGRunningN, Rational(1)}};

  NoteGVariant g;
  g.n_var = kNoteGRunningN.index;
  g.counter_is_n = true;
  g.result = to_stepping(21);
  g.result_label = "= B(2n - 1)";
  add_note_g_cycle(deck, g);
  add_step(deck, SUB, v(3), v(1), {to(3)}, "cycles remaining");
  deck.repeats.push_back({1, 26, kNoteGCountVar});
  return deck;
}

std::vector<Rational> note_g_results(const Store& store, std::size_t count) {
  std::vector<Rational> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(store.at(VarId{21 + k}).value);
  return out;
}

Deck prime_poly_deck(std::uint32_t count) {
  if (count == 0) throw std::invalid_argument("prime_poly_deck requires count >= 1");
  Deck deck;
  deck.name = "primes x^2 + x + 41";
  deck.presets = {{VarId{0}, Rational(0)},
                  {VarId{1}, Rational(41)},
                  {VarId{2}, Rational(2)},
                  {VarId{3}, Rational(2)},
                  {VarId{4}, Rational(static_cast<long long>(count))},
                  {VarId{5}, Rational(1)}};
  add_step(deck, ADD, v(1), v(0), {to_stepping(kPrimeResultFirst.index)}, "= f(x)");
  add_step(deck, ADD, v(1), v(2), {to(1)}, "= f(x + 1)");
  add_step(deck, ADD, v(2), v(3), {to(2)}, "= f(x + 2) - f(x + 1)");
  add_step(deck, SUB, v(4), v(5), {to(4)}, "values still to tabulate");
  deck.repeats.push_back({1, 4, VarId{4}});
  return deck;
}

std::vector<Rational> prime_results(const Store& store, std::size_t count) {
  std::vector<Rational> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(store.at(VarId{kPrimeResultFirst.index + k}).value);
  }
  return out;
}

std::size_t prime_poly_capacity(std::uint32_t count) {
  return std::max<std::size_t>(kDefaultCapacity, kPrimeResultFirst.index + count);
}

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

const ShippedDeck& shipped_deck(std::string_view name) {
  for (const auto& d : shipped_decks()) {
    if (d.name == name) return d;
  }
  throw std::out_of_range("no shipped deck named '" + std::string(name) + "'");
}

Deck shipped_deck_constructor(std::string_view name) {
  if (name == "note_d") return note_d_deck();
  if (name == "note_g_cycle") return note_g_cycle_deck(4);
  if (name == "note_g_full") return note_g_full_deck(10);
  if (name == "primes") return prime_poly_deck(40);
  throw std::out_of_range("no shipped deck named '" + std::string(name) + "'");
}

}  // namespace aengine

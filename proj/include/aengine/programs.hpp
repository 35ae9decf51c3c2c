#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "aengine/deck.hpp"
#include "aengine/mill.hpp"
#include "aengine/numeric.hpp"

namespace aengine {

// ---------------------------------------------------------------------------
// Note D: two linear equations in two unknowns, straight-line.

/// mx + ny = d, m'x + n'y = d'.
struct LinearSystem2x2 {
  Rational m, n, d;
  Rational m2, n2, d2;  // the primed coefficients
};

struct SingularSystem : std::domain_error {
  SingularSystem() : std::domain_error("singular system: mn' - m'n = 0") {}
};

/// (x, y) by the closed formulas. Throws SingularSystem.
std::pair<Rational, Rational> solve_2x2_reference(const LinearSystem2x2& sys);

/// Inputs V0..V5 = m, n, d, m', n', d'; working V6..V14; x in V15, y in V16.
Deck note_d_deck();

Bindings note_d_bindings(const LinearSystem2x2& sys);

inline constexpr VarId kNoteDx{15};
inline constexpr VarId kNoteDy{16};

// ---------------------------------------------------------------------------
// Note G: Bernoulli numbers.

/// Column layout shared by the Note G decks.
struct NoteGLayout {
  VarId zero{0};                                  // constant 0; counter of the factor groups
  std::vector<VarId> data_vars{{1}, {2}, {3}};    // 1, 2, n
  VarId working_first{4};
  VarId working_last{14};
  VarId result_first{21};
  std::size_t result_count = 0;
  VarId counter_var{10};                          // the (13,23) block counter

  VarId result(std::size_t k) const { return VarId{result_first.index + k}; }  // B^L_{2k+1}
};

NoteGLayout note_g_layout(std::size_t result_count);

/// One cycle of the 1843 table: computes B^L_{2n-1} from B^L_1..B^L_{2n-3},
/// which must be bound as inputs V21..V(19+n). The result lands in V(20+n).
/// 25 steps; blocks (13,23) counted by V10 = n - 2, and the factor groups
/// (13,16), (17,20).
///
/// For n <= 2 the (13,23) block cannot be skipped, so step 12 sets the
/// counter to n instead; the extra passes multiply by result columns that are
/// still zero and by a coefficient containing the factor 2n - 2k = 0.
Deck note_g_cycle_deck(std::uint32_t n);

/// Closed program: the cycle wrapped in an outermost block that runs n_max
/// cycles, depositing B^L_1, B^L_3, ... in V21, V22, .... V3 holds the number
/// of cycles still to run; the running n lives in V14.
Deck note_g_full_deck(std::uint32_t n_max);

inline constexpr VarId kNoteGCountVar{3};
inline constexpr VarId kNoteGRunningN{14};

/// Reads `count` consecutive result columns starting at V21.
std::vector<Rational> note_g_results(const Store& store, std::size_t count);

// ---------------------------------------------------------------------------
// x^2 + x + 41 by the method of differences.

/// f(0) .. f(count-1) into V10, V11, ...; the loop body only adds.
Deck prime_poly_deck(std::uint32_t count);

inline constexpr VarId kPrimeResultFirst{10};

std::vector<Rational> prime_results(const Store& store, std::size_t count);

/// Store size needed to run prime_poly_deck(count).
std::size_t prime_poly_capacity(std::uint32_t count);

bool is_prime_trial(std::uint64_t n);

// ---------------------------------------------------------------------------
// Shipped deck texts, embedded at build time.

struct ShippedDeck {
  std::string_view name;       // e.g. "note_g_full"
  std::string_view file_name;  // e.g. "note_g_full.deck"
  std::string_view text;
};

const std::vector<ShippedDeck>& shipped_decks();

/// Throws std::out_of_range for an unknown name.
const ShippedDeck& shipped_deck(std::string_view name);

/// The constructor output that the embedded text of `name` must serialize to.
/// Throws std::out_of_range for an unknown name.
Deck shipped_deck_constructor(std::string_view name);

}  // namespace aengine

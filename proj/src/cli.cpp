#include "aengine/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aengine/bernoulli.hpp"
#include "aengine/deck.hpp"
#include "aengine/mill.hpp"
#include "aengine/numeric.hpp"
#include "aengine/programs.hpp"

namespace aengine::cli {

namespace {

constexpr const char* kBanner = "aengine 1.0.0 - Analytical Engine card-deck emulator";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

Deck load_deck(const std::string& path) { return parse_deck(read_file(path)); }

std::pair<VarId, Rational> parse_binding(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq < 2 || text[0] != 'V') {
    throw UsageError("--set expects Vk=value, got '" + text + "'");
  }
  const std::string index = text.substr(1, eq - 1);
  if (index.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError("--set expects Vk=value, got '" + text + "'");
  }
  try {
    return {VarId{std::stoull(index)}, Rational::parse(text.substr(eq + 1))};
  } catch (const std::exception& e) {
    throw UsageError("--set " + text + ": " + e.what());
  }
}

/// Every variable that received at least one result, in index order.
void print_received(const RunResult& r, std::ostream& os) {
  std::set<VarId> received;
  for (const auto& row : r.trace) {
    for (const auto& rec : row.receivers) received.insert(rec.var);
  }
  for (const VarId v : received) {
    os << to_string(v) << " = " << r.final_store.at(v).value << '\n';
  }
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string deck_path;
  std::vector<std::string> sets;
  std::string trace_mode = "none";
  std::string trace_out;
  std::uint64_t max_steps = RunLimits{}.max_executed_steps;
  std::size_t capacity = kDefaultCapacity;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const Deck deck = load_deck(a.deck_path);
  Bindings bindings;
  for (const auto& s : a.sets) {
    auto [var, value] = parse_binding(s);
    bindings[var] = std::move(value);
  }
  const RunResult result = execute(deck, bindings, RunLimits{a.max_steps}, a.capacity);

  std::string trace_text;
  if (a.trace_mode == "table") {
    trace_text = render_trace_table(result.trace, deck);
  } else if (a.trace_mode == "jsonl") {
    trace_text = trace_to_records(result.trace);
  }

  // A JSON Lines trace on stdout stays pure; the summary then goes to stderr.
  std::ostream& summary = (a.trace_mode == "jsonl" && a.trace_out.empty()) ? err : out;
  if (!a.trace_out.empty()) {
    write_file(a.trace_out, trace_text);
  } else {
    out << trace_text;
  }
  summary << "steps executed: " << result.steps_executed << '\n';
  print_received(result, summary);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// bernoulli

BernoulliConvention parse_convention(const std::string& s) {
  if (s == "modern") return BernoulliConvention::ModernEven;
  if (s == "sum-of-powers") return BernoulliConvention::SumOfPowers;
  if (s == "lovelace") return BernoulliConvention::LovelaceOdd;
  throw UsageError("unknown convention '" + s + "'");
}

Rational engine_bernoulli(std::uint32_t m) {
  const std::uint32_t n_max = m / 2;
  const Deck deck = note_g_full_deck(n_max);
  const std::size_t capacity = std::max<std::size_t>(kDefaultCapacity, 22 + n_max);
  const RunResult r = execute(deck, {}, RunLimits{}, capacity);
  return r.final_store.at(VarId{20 + n_max}).value;
}

int cmd_bernoulli(std::int64_t index, const std::string& convention, const std::string& method,
                  std::ostream& out) {
  const BernoulliConvention conv = parse_convention(convention);
  std::uint32_t m = 0;
  try {
    m = modern_index(conv, index);
  } catch (const InvalidIndex& e) {
    throw UsageError(e.what());
  }
  const bool sum_of_powers_b1 = conv == BernoulliConvention::SumOfPowers && m == 1;
  const bool even_from_two = m >= 2 && m % 2 == 0;

  Rational value;
  if (method == "recurrence") {
    value = bernoulli(conv, index);
  } else if (method == "egf") {
    value = egf_coefficients(m).coefficients[m] * Rational(factorial(m));
    if (sum_of_powers_b1) value = -value;
  } else if (method == "demorgan") {
    if (m < 2) throw UsageError("the demorgan method yields B_m for modern m >= 2");
    value = demorgan_bernoulli(m - 1);
  } else if (method == "eq8" || method == "engine") {
    if (!even_from_two) {
      throw UsageError("the " + method + " method yields only modern even indices >= 2");
    }
    value = method == "eq8" ? eq8_sequence(m / 2).back() : engine_bernoulli(m);
  } else {
    throw UsageError("unknown method '" + method + "'");
  }
  out << value << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------------------
// check

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

SuiteResult suite_oracles() {
  SuiteResult r{"oracle agreement, B0..B30", true, {}};
  const auto eq8 = eq8_sequence(15);
  const auto egf = egf_coefficients(30);
  for (std::uint32_t m = 2; m <= 30; ++m) {
    const Rational modern = bernoulli_modern(m);
    const Rational dm = demorgan_bernoulli(m - 1);
    const Rational from_egf = egf.coefficients[m] * Rational(factorial(m));
    bool ok = modern == dm && modern == from_egf;
    if (m % 2 == 0) ok = ok && modern == eq8[m / 2 - 1];
    if (!ok && r.pass) {
      r.pass = false;
      r.detail = "disagreement at m=" + std::to_string(m);
    }
  }
  if (bernoulli_modern(0) != Rational(1) || bernoulli_modern(1) != Rational(-1, 2)) {
    r.pass = false;
    r.detail = "B0/B1 wrong";
  }
  return r;
}

SuiteResult suite_demorgan() {
  SuiteResult r{"De Morgan worked example, n=7", true, {}};
  const long long numerators[] = {1, 126, 1806, 8400, 16800, 15120, 5040};
  const auto terms = demorgan_terms(7);
  for (std::size_t k = 1; k <= 7; ++k) {
    const auto& t = terms[k];
    const int sign = k % 2 == 0 ? 1 : -1;
    if (t.numerator != numerators[k - 1] || t.denominator != BigInt(1) << (k + 1) ||
        t.sign != sign) {
      r.pass = false;
      r.detail = "term k=" + std::to_string(k) + " differs from the printed display";
    }
  }
  if (!terms[0].numerator.is_zero() || demorgan_bernoulli(7) != Rational(-1, 30)) {
    r.pass = false;
    r.detail = "final value is not -1/30";
  }
  return r;
}

SuiteResult suite_engine(const Deck& full_deck) {
  SuiteResult r{"engine equivalence, Note G n_max 1..10", true, {}};
  for (std::uint32_t n_max = 1; n_max <= 10 && r.pass; ++n_max) {
    try {
      const RunResult run =
          execute(full_deck, {{kNoteGCountVar, Rational(static_cast<long long>(n_max))}});
      const auto got = note_g_results(run.final_store, n_max);
      const auto want = eq8_sequence(n_max);
      for (std::uint32_t k = 0; k < n_max; ++k) {
        if (got[k] != want[k] || got[k] != bernoulli_modern(2 * (k + 1))) {
          r.pass = false;
          r.detail = "n_max=" + std::to_string(n_max) + ": V" + std::to_string(21 + k) + " = " +
                     got[k].str() + ", expected " + want[k].str();
          break;
        }
      }
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = "n_max=" + std::to_string(n_max) + ": " + e.what();
    }
  }
  return r;
}

SuiteResult suite_faulhaber() {
  SuiteResult r{"Faulhaber vs brute force, p<=10 x<=200", true, {}};
  for (std::uint32_t p = 0; p <= 10 && r.pass; ++p) {
    BigInt brute = 0;
    for (std::uint64_t x = 0; x <= 200; ++x) {
      if (x > 0) brute += ipow(BigInt(x), p);
      if (faulhaber_sum(p, x) != brute) {
        r.pass = false;
        r.detail = "p=" + std::to_string(p) + " x=" + std::to_string(x);
        break;
      }
    }
  }
  if (faulhaber_sum(10, 1000) != BigInt("91409924241424243424241924242500")) {
    r.pass = false;
    r.detail = "sum of tenth powers to 1000 differs from the 31-digit value";
  }
  return r;
}

SuiteResult suite_note_d() {
  SuiteResult r{"Note D, 100 random nonsingular systems", true, {}};
  std::mt19937_64 gen(1843);
  auto coeff = [&] { return Rational(static_cast<long long>(gen() % 19) - 9); };
  const Deck deck = note_d_deck();
  int solved = 0;
  while (solved < 100 && r.pass) {
    LinearSystem2x2 s{coeff(), coeff(), coeff(), coeff(), coeff(), coeff()};
    if ((s.m * s.n2 - s.m2 * s.n).is_zero()) continue;
    ++solved;
    const auto [x, y] = solve_2x2_reference(s);
    const RunResult run = execute(deck, note_d_bindings(s));
    if (run.final_store.at(kNoteDx).value != x || run.final_store.at(kNoteDy).value != y) {
      r.pass = false;
      r.detail = "system #" + std::to_string(solved);
    }
  }
  try {
    execute(deck, note_d_bindings({1, 1, 1, 2, 2, 2}));
    r.pass = false;
    r.detail = "singular system did not fault";
  } catch (const DivisionByZeroAtStep& e) {
    if (e.step != 10) {
      r.pass = false;
      r.detail = "singular system faulted at step " + std::to_string(e.step);
    }
  }
  return r;
}

SuiteResult suite_primes() {
  SuiteResult r{"x^2 + x + 41 by differences, 40 values", true, {}};
  const Deck deck = prime_poly_deck(40);
  const RunResult run = execute(deck, {});
  const auto values = prime_results(run.final_store, 40);
  for (std::uint64_t x = 0; x < 40; ++x) {
    const Rational want(static_cast<long long>(x * x + x + 41));
    if (values[x] != want ||
        !is_prime_trial(static_cast<std::uint64_t>(values[x].numerator()))) {
      r.pass = false;
      r.detail = "f(" + std::to_string(x) + ") = " + values[x].str();
      break;
    }
  }
  return r;
}

int cmd_check(const std::string& note_g_path, bool plain, std::ostream& out) {
  const Deck full = note_g_path.empty() ? parse_deck(shipped_deck("note_g_full").text)
                                        : load_deck(note_g_path);
  if (!plain) out << kBanner << '\n';
  const std::vector<SuiteResult> results = {suite_oracles(),   suite_demorgan(),
                                            suite_engine(full), suite_faulhaber(),
                                            suite_note_d(),     suite_primes()};
  int failed = 0;
  for (const auto& r : results) {
    out << (r.pass ? "PASS  " : "FAIL  ") << r.name;
    if (!r.pass) {
      out << ": " << r.detail;
      ++failed;
    }
    out << '\n';
  }
  if (failed == 0) {
    out << "all " << results.size() << " suites passed\n";
    return kSuccess;
  }
  out << failed << " of " << results.size() << " suites failed\n";
  return kMismatch;
}

// ---------------------------------------------------------------------------
// sum-powers, primes

int cmd_sum_powers(std::uint32_t p, std::uint64_t x, bool brute_force, std::ostream& out) {
  const BigInt value = faulhaber_sum(p, x);
  out << value << '\n';
  if (!brute_force) return kSuccess;
  BigInt brute = 0;
  for (std::uint64_t k = 1; k <= x; ++k) brute += ipow(BigInt(k), p);
  out << brute << '\n';
  const bool match = brute == value;
  out << (match ? "MATCH" : "MISMATCH") << '\n';
  return match ? kSuccess : kMismatch;
}

int cmd_primes(std::uint32_t count, std::ostream& out) {
  if (count == 0) throw UsageError("--count must be at least 1");
  const Deck deck = prime_poly_deck(count);
  const RunResult run = execute(deck, {}, RunLimits{}, prime_poly_capacity(count));
  int composites = 0;
  const auto values = prime_results(run.final_store, count);
  for (std::size_t x = 0; x < values.size(); ++x) {
    const bool prime = is_prime_trial(static_cast<std::uint64_t>(values[x].numerator()));
    if (!prime) ++composites;
    out << "f(" << x << ") = " << values[x] << (prime ? "  prime" : "  COMPOSITE") << '\n';
  }
  return composites == 0 ? kSuccess : kMismatch;
}

// ---------------------------------------------------------------------------
// mutate, export

int cmd_mutate(const std::string& in, std::uint32_t step, const std::string& kind,
               const std::string& out_path, std::ostream& out) {
  const Deck deck = load_deck(in);
  Mutation m = Mutation::SubAdd;
  if (kind == "swap") {
    m = Mutation::SwapOperands;
  } else if (kind != "sub-add") {
    throw UsageError("unknown mutation kind '" + kind + "'");
  }
  Deck mutated;
  try {
    mutated = mutate_flip_operation(deck, step, m);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const std::string text = serialize_deck(mutated);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kSuccess;
}

int cmd_export(const std::string& name, const std::string& dir, const std::string& out_path,
               std::ostream& out) {
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    for (const auto& d : shipped_decks()) {
      write_file((std::filesystem::path(dir) / d.file_name).string(), d.text);
      out << "wrote " << d.file_name << '\n';
    }
    return kSuccess;
  }
  for (const auto& d : shipped_decks()) {
    if (d.name == name || d.file_name == name) {
      if (out_path.empty()) {
        out << d.text;
      } else {
        write_file(out_path, d.text);
      }
      return kSuccess;
    }
  }
  std::string known;
  for (const auto& d : shipped_decks()) known += " " + std::string(d.name);
  throw UsageError("no shipped deck '" + name + "'; available:" + known);
}

// ---------------------------------------------------------------------------
// diff

int cmd_diff(const std::string& path_a, const std::string& path_b, std::ostream& out) {
  std::vector<TraceRow> a;
  std::vector<TraceRow> b;
  try {
    a = trace_from_records(read_file(path_a));
    b = trace_from_records(read_file(path_b));
  } catch (const TraceFormatError& e) {
    throw UsageError(e.what());
  }
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (a[i] == b[i]) continue;
    const auto ja = nlohmann::ordered_json::parse(trace_to_records({a[i]}));
    const auto jb = nlohmann::ordered_json::parse(trace_to_records({b[i]}));
    out << "first divergence at ordinal " << a[i].ordinal << ", step " << a[i].step_number
        << '\n';
    for (const auto& [key, value] : ja.items()) {
      if (jb.at(key) != value) {
        out << "  " << key << ": " << value.dump() << " vs " << jb.at(key).dump() << '\n';
      }
    }
    return kMismatch;
  }
  if (a.size() != b.size()) {
    const auto& longer = a.size() > b.size() ? a : b;
    out << "first divergence at ordinal " << longer[common].ordinal << ", step "
        << longer[common].step_number << '\n';
    out << "  trace " << (a.size() > b.size() ? "b" : "a") << " ends after " << common
        << " rows\n";
    return kMismatch;
  }
  out << "identical\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analytical Engine card-deck emulator with exact rational arithmetic", "aengine"};
  app.require_subcommand(1, 1);
  bool plain = false;
  app.add_flag("--plain", plain, "Suppress the version banner in human-readable output");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Execute a deck");
  run_cmd->add_option("deck", run_args.deck_path, "Deck file")->required();
  run_cmd->add_option("--set", run_args.sets, "Bind a variable, Vk=value (repeatable)")
      ->allow_extra_args(false);
  run_cmd->add_option("--trace", run_args.trace_mode, "Trace format")
      ->check(CLI::IsMember({"table", "jsonl", "none"}));
  run_cmd->add_option("--trace-out", run_args.trace_out, "Write the trace to a file");
  run_cmd->add_option("--max-steps", run_args.max_steps, "Executed-step limit")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--capacity", run_args.capacity, "Store size")->check(CLI::PositiveNumber);

  std::int64_t b_index = 0;
  std::string b_convention = "modern";
  std::string b_method = "recurrence";
  auto* bern_cmd = app.add_subcommand("bernoulli", "Compute one Bernoulli number exactly");
  bern_cmd->add_option("--n", b_index, "Index in the chosen convention")->required();
  bern_cmd->add_option("--convention", b_convention)
      ->check(CLI::IsMember({"modern", "sum-of-powers", "lovelace"}));
  bern_cmd->add_option("--method", b_method)
      ->check(CLI::IsMember({"recurrence", "eq8", "demorgan", "egf", "engine"}));

  std::string check_deck;
  auto* check_cmd = app.add_subcommand("check", "Run every oracle and engine cross-check");
  check_cmd->add_option("--note-g-deck", check_deck, "Use this full Note G deck instead of the embedded one");

  std::uint32_t sp_p = 0;
  std::uint64_t sp_x = 0;
  bool sp_brute = false;
  auto* sum_cmd = app.add_subcommand("sum-powers", "1^p + 2^p + ... + x^p by Faulhaber's formula");
  sum_cmd->add_option("--p", sp_p)->required();
  sum_cmd->add_option("--x", sp_x)->required();
  sum_cmd->add_flag("--brute-force", sp_brute, "Also sum directly and compare");

  std::uint32_t prime_count = 40;
  auto* primes_cmd = app.add_subcommand("primes", "Tabulate x^2 + x + 41 on the engine");
  primes_cmd->add_option("--count", prime_count);

  std::string mut_in;
  std::string mut_out;
  std::string mut_kind = "sub-add";
  std::uint32_t mut_step = 0;
  auto* mutate_cmd = app.add_subcommand("mutate", "Write a copy of a deck with one step altered");
  mutate_cmd->add_option("deck", mut_in)->required();
  mutate_cmd->add_option("--flip-at", mut_step)->required();
  mutate_cmd->add_option("--kind", mut_kind)->check(CLI::IsMember({"sub-add", "swap"}));
  mutate_cmd->add_option("-o,--output", mut_out);

  std::string diff_a;
  std::string diff_b;
  auto* diff_cmd = app.add_subcommand("diff", "Locate the first divergence of two JSON Lines traces");
  diff_cmd->add_option("a", diff_a)->required();
  diff_cmd->add_option("b", diff_b)->required();

  std::string exp_name;
  std::string exp_dir;
  std::string exp_out;
  auto* export_cmd = app.add_subcommand("export", "Write the shipped decks");
  export_cmd->add_option("name", exp_name, "note_d, note_g_cycle, note_g_full or primes");
  export_cmd->add_option("--dir", exp_dir, "Write every shipped deck into this directory");
  export_cmd->add_option("-o,--output", exp_out);

  std::vector<const char*> argv{"aengine"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_args, out, err);
    if (*bern_cmd) return cmd_bernoulli(b_index, b_convention, b_method, out);
    if (*check_cmd) return cmd_check(check_deck, plain, out);
    if (*sum_cmd) return cmd_sum_powers(sp_p, sp_x, sp_brute, out);
    if (*primes_cmd) return cmd_primes(prime_count, out);
    if (*mutate_cmd) return cmd_mutate(mut_in, mut_step, mut_kind, mut_out, out);
    if (*diff_cmd) return cmd_diff(diff_a, diff_b, out);
    if (*export_cmd) {
      if (exp_name.empty() && exp_dir.empty()) throw UsageError("export needs a name or --dir");
      return cmd_export(exp_name, exp_dir, exp_out, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const ExecutionError& e) {
    err << "runtime error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace aengine::cli

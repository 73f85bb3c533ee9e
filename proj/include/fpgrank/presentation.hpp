#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpgrank {

struct Letter {
  int generator = 0;
  int exponent = 0;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Element of a free group as a sequence of powers of generators.
///
/// Words produced by this module are freely reduced: adjacent letters carry
/// distinct generators and no exponent is zero. The empty word is the identity.
struct GroupWord {
  std::vector<Letter> letters;

  bool is_identity() const { return letters.empty(); }
  /// Number of letters counted with multiplicity (|x^3| = 3).
  std::int64_t length() const;

  static GroupWord identity() { return {}; }
  static GroupWord generator(int index, int exponent = 1);

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

GroupWord free_reduce(const GroupWord& w);
GroupWord operator*(const GroupWord& u, const GroupWord& v);
GroupWord inverse(const GroupWord& w);
GroupWord power(const GroupWord& w, std::int64_t e);
/// [u, v] = u^-1 v^-1 u v
GroupWord commutator(const GroupWord& u, const GroupWord& v);
/// Left-normed [x, g, ..., g] with `depth` copies of g.
GroupWord iterated_commutator(const GroupWord& x, const GroupWord& g, int depth);
/// Total exponent of each generator; the image of w in the abelianization.
std::vector<std::int64_t> exponent_sums(const GroupWord& w, std::size_t num_generators);
bool uses_generator(const GroupWord& w, int generator);

std::string to_string(const GroupWord& w, const std::vector<std::string>& names);

struct GroupPresentation {
  unsigned p = 2;
  std::vector<std::string> generators;
  /// Each relator r stands for the relation r = 1.
  std::vector<GroupWord> relators;

  std::size_t num_generators() const { return generators.size(); }
  std::optional<int> generator_index(std::string_view name) const;
};

/// Parses the line-oriented presentation format:
///
///     p = 2
///     gens = x, g
///     rels = [x,g] = x^2; [x,g,g]*x^-1
///
/// Statements may also share a line, separated by `;`. Every relator after
/// `rels =` is a word expression built from generators, `^` exponents,
/// left-normed commutators `[u,v,w]`, parentheses, `*` and an optional `=`.
/// Equations u = v are stored as the reduced relator u v^-1.
/// Throws ParseError on malformed input.
GroupPresentation parse_presentation(std::string_view text);

/// Parses a single word expression over the presentation's generators.
GroupWord parse_word(std::string_view text, const std::vector<std::string>& generators);

/// Inverse of parse_presentation on normalized presentations.
std::string serialize_presentation(const GroupPresentation& pres);

/// Recognized shape of a presentation with relators [x_i, g, ..., g] = h_i.
struct FlagInfo {
  bool is_flag = false;
  bool is_mild = false;
  /// Kernel generators x_1..x_n; the first l carry relators, in relator order.
  std::vector<int> kernel_generators;
  int distinguished_generator = -1;
  /// a_i: the number of copies of g in relator i.
  std::vector<int> a_values;
  /// h_i as words in the kernel generators.
  std::vector<GroupWord> h_words;

  std::size_t num_kernel() const { return kernel_generators.size(); }
  std::size_t num_relators() const { return a_values.size(); }
};

/// Detects a (mild) flag structure. Never throws; returns is_flag = false
/// when no choice of g, x_i and a_i fits.
FlagInfo validate_flag(const GroupPresentation& pres);

}  // namespace fpgrank

#include "fpgrank/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "fpgrank/errors.hpp"
#include "fpgrank/field.hpp"

namespace fpgrank {

std::int64_t GroupWord::length() const {
  std::int64_t n = 0;
  for (const auto& l : letters) n += l.exponent < 0 ? -std::int64_t(l.exponent) : l.exponent;
  return n;
}

GroupWord GroupWord::generator(int index, int exponent) {
  GroupWord w;
  if (exponent != 0) w.letters.push_back({index, exponent});
  return w;
}

GroupWord free_reduce(const GroupWord& w) {
  // stack-based: each incoming letter merges with the top when generators match
  std::vector<Letter> out;
  out.reserve(w.letters.size());
  for (const auto& l : w.letters) {
    if (l.exponent == 0) continue;
    if (!out.empty() && out.back().generator == l.generator) {
      out.back().exponent += l.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return GroupWord{std::move(out)};
}

GroupWord operator*(const GroupWord& u, const GroupWord& v) {
  GroupWord w = u;
  w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
  return free_reduce(w);
}

GroupWord inverse(const GroupWord& w) {
  GroupWord r;
  r.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    r.letters.push_back({it->generator, -it->exponent});
  return r;
}

GroupWord power(const GroupWord& w, std::int64_t e) {
  GroupWord base = e < 0 ? inverse(w) : w;
  GroupWord r;
  for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i) r = r * base;
  return r;
}

GroupWord commutator(const GroupWord& u, const GroupWord& v) {
  return inverse(u) * inverse(v) * u * v;
}

GroupWord iterated_commutator(const GroupWord& x, const GroupWord& g, int depth) {
  GroupWord c = x;
  for (int i = 0; i < depth; ++i) c = commutator(c, g);
  return c;
}

std::vector<std::int64_t> exponent_sums(const GroupWord& w, std::size_t num_generators) {
  std::vector<std::int64_t> sums(num_generators, 0);
  for (const auto& l : w.letters)
    if (l.generator >= 0 && std::size_t(l.generator) < num_generators) sums[l.generator] += l.exponent;
  return sums;
}

bool uses_generator(const GroupWord& w, int generator) {
  return std::any_of(w.letters.begin(), w.letters.end(),
                     [&](const Letter& l) { return l.generator == generator; });
}

std::string to_string(const GroupWord& w, const std::vector<std::string>& names) {
  if (w.is_identity()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += '*';
    const auto& l = w.letters[i];
    out += (l.generator >= 0 && std::size_t(l.generator) < names.size())
               ? names[l.generator]
               : "?" + std::to_string(l.generator);
    if (l.exponent != 1) out += '^' + std::to_string(l.exponent);
  }
  return out;
}

std::optional<int> GroupPresentation::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == name) return int(i);
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_reserved(std::string_view name) { return name == "p" || name == "gens" || name == "rels"; }

/// Recursive-descent parser for one word expression.
class WordParser {
 public:
  WordParser(std::string_view text, const std::vector<std::string>& generators)
      : text_(text), generators_(generators) {}

  GroupWord parse_relator() {
    GroupWord lhs = parse_product();
    skip_space();
    if (peek() == '=') {
      ++pos_;
      GroupWord rhs = parse_product();
      lhs = lhs * inverse(rhs);
    }
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return free_reduce(lhs);
  }

 private:
  GroupWord parse_product() {
    GroupWord w = parse_factor();
    for (;;) {
      skip_space();
      if (peek() != '*') break;
      ++pos_;
      w = w * parse_factor();
    }
    return w;
  }

  GroupWord parse_factor() {
    GroupWord base = parse_atom();
    skip_space();
    if (peek() == '^') {
      ++pos_;
      base = power(base, parse_exponent());
    }
    return base;
  }

  std::int64_t parse_exponent() {
    skip_space();
    bool paren = false;
    if (peek() == '(') {
      paren = true;
      ++pos_;
      skip_space();
    }
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
    }
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
    std::int64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000) fail("exponent too large");
      ++pos_;
    }
    if (paren) {
      skip_space();
      if (peek() != ')') fail("expected ')' after exponent");
      ++pos_;
    }
    return negative ? -value : value;
  }

  GroupWord parse_atom() {
    skip_space();
    char c = peek();
    if (c == '(') {
      ++pos_;
      GroupWord w = parse_product();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      GroupWord acc = parse_product();
      int parts = 1;
      for (;;) {
        skip_space();
        if (peek() == ',') {
          ++pos_;
          acc = commutator(acc, parse_product());
          ++parts;
        } else {
          break;
        }
      }
      if (parts < 2) fail("commutator needs at least two entries");
      expect(']');
      return acc;
    }
    if (c == '1') {
      ++pos_;
      return GroupWord::identity();
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (is_ident_char(peek())) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i] == name) return GroupWord::generator(int(i));
      fail("undeclared generator '" + name + "'");
    }
    fail(c == '\0' ? "unexpected end of expression" : "unexpected character '" + std::string(1, c) + "'");
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("in word '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " +
                     what);
  }

  std::string_view text_;
  const std::vector<std::string>& generators_;
  std::size_t pos_ = 0;
};

/// Splits "key = value" when key is one of the reserved statement keywords.
std::optional<std::pair<std::string, std::string_view>> keyword_statement(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_ident_char(s[i])) ++i;
  std::string_view key = s.substr(0, i);
  if (!is_reserved(key)) return std::nullopt;
  std::string_view rest = trim(s.substr(i));
  if (rest.empty() || rest.front() != '=') return std::nullopt;
  return std::make_pair(std::string(key), trim(rest.substr(1)));
}

}  // namespace

GroupWord parse_word(std::string_view text, const std::vector<std::string>& generators) {
  return WordParser(trim(text), generators).parse_relator();
}

GroupPresentation parse_presentation(std::string_view text) {
  // statements are separated by newlines or ';'; '#' starts a comment
  std::vector<std::string_view> statements;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t seg_start = 0;
    while (seg_start <= line.size()) {
      std::size_t seg_end = line.find(';', seg_start);
      if (seg_end == std::string_view::npos) seg_end = line.size();
      statements.push_back(trim(line.substr(seg_start, seg_end - seg_start)));
      seg_start = seg_end + 1;
    }
    line_start = line_end + 1;
  }

  std::optional<std::int64_t> p;
  std::optional<std::vector<std::string>> gens;
  std::vector<std::string> relator_texts;
  bool in_rels = false;

  for (std::string_view st : statements) {
    if (auto kw = keyword_statement(st)) {
      const auto& [key, value] = *kw;
      in_rels = false;
      if (key == "p") {
        if (p) throw ParseError("duplicate 'p' statement");
        std::string v(value);
        if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
            v.size() > 9)
          throw ParseError("'p' must be a positive integer, got '" + v + "'");
        p = std::stoll(v);
      } else if (key == "gens") {
        if (gens) throw ParseError("duplicate 'gens' statement");
        gens.emplace();
        std::size_t start = 0;
        if (!value.empty()) {
          while (start <= value.size()) {
            std::size_t comma = value.find(',', start);
            if (comma == std::string_view::npos) comma = value.size();
            std::string name(trim(value.substr(start, comma - start)));
            if (name.empty() || !is_ident_start(name[0]) ||
                !std::all_of(name.begin(), name.end(), is_ident_char))
              throw ParseError("invalid generator name '" + name + "'");
            if (is_reserved(name)) throw ParseError("generator name '" + name + "' is reserved");
            if (std::find(gens->begin(), gens->end(), name) != gens->end())
              throw ParseError("duplicate generator '" + name + "'");
            gens->push_back(std::move(name));
            start = comma + 1;
          }
        }
      } else {
        in_rels = true;
        if (!value.empty()) relator_texts.emplace_back(value);
      }
      continue;
    }
    if (st.empty()) continue;
    if (!in_rels) throw ParseError("unexpected statement '" + std::string(st) + "'");
    relator_texts.emplace_back(st);
  }

  if (!p) throw ParseError("missing 'p' statement");
  if (!is_prime(*p) || *p >= 256) throw ConfigError("p = " + std::to_string(*p) + " is not a prime below 256");
  if (!gens) throw ParseError("missing 'gens' statement");

  GroupPresentation pres;
  pres.p = unsigned(*p);
  pres.generators = std::move(*gens);
  for (const auto& rt : relator_texts) pres.relators.push_back(parse_word(rt, pres.generators));
  return pres;
}

std::string serialize_presentation(const GroupPresentation& pres) {
  std::ostringstream out;
  out << "p = " << pres.p << '\n';
  out << "gens = ";
  for (std::size_t i = 0; i < pres.generators.size(); ++i) out << (i ? ", " : "") << pres.generators[i];
  out << '\n' << "rels = ";
  for (std::size_t i = 0; i < pres.relators.size(); ++i)
    out << (i ? "; " : "") << to_string(pres.relators[i], pres.generators);
  out << '\n';
  return out.str();
}

namespace {

std::int64_t count_letters_of(const GroupWord& w, int generator) {
  std::int64_t n = 0;
  for (const auto& l : w.letters)
    if (l.generator == generator) n += l.exponent < 0 ? -std::int64_t(l.exponent) : l.exponent;
  return n;
}

/// h_i in Phi of the free group on the kernel letters: every exponent sum is 0 mod p.
bool in_frattini(const GroupWord& h, std::size_t num_generators, unsigned p) {
  for (auto s : exponent_sums(h, num_generators))
    if (s % std::int64_t(p) != 0) return false;
  return true;
}

std::optional<FlagInfo> try_flag_with(const GroupPresentation& pres, int g) {
  const std::size_t d = pres.num_generators();
  FlagInfo info;
  info.distinguished_generator = g;
  const GroupWord gw = GroupWord::generator(g);
  std::vector<bool> used(d, false);

  for (const auto& r : pres.relators) {
    const std::int64_t g_count = count_letters_of(r, g);
    bool matched = false;
    for (std::size_t x = 0; x < d && !matched; ++x) {
      if (int(x) == g || used[x]) continue;
      GroupWord c = GroupWord::generator(int(x));
      for (int a = 1;; ++a) {
        c = commutator(c, gw);
        if (count_letters_of(c, g) > g_count) break;
        // r = c h^-1 forces h = r^-1 c in the free group
        GroupWord h = inverse(r) * c;
        if (uses_generator(h, g) || !in_frattini(h, d, pres.p)) continue;
        used[x] = true;
        info.kernel_generators.push_back(int(x));
        info.a_values.push_back(a);
        info.h_words.push_back(std::move(h));
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  for (std::size_t x = 0; x < d; ++x)
    if (int(x) != g && !used[x]) info.kernel_generators.push_back(int(x));
  info.is_flag = true;
  info.is_mild = std::all_of(info.a_values.begin(), info.a_values.end(), [](int a) { return a == 1; });
  return info;
}

}  // namespace

FlagInfo validate_flag(const GroupPresentation& pres) {
  // the distinguished generator is searched from the last declared one backwards
  for (int g = int(pres.num_generators()) - 1; g >= 0; --g)
    if (auto info = try_flag_with(pres, g)) return *info;
  return FlagInfo{};
}

}  // namespace fpgrank

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace schreier {

// A free-group generator a_i or its inverse. Indices are 1-based.
struct Generator {
  int index = 1;
  int sign = +1;  // +1 for a_i, -1 for a_i^-1

  Generator inverse() const { return {index, -sign}; }
};

inline bool operator==(const Generator& a, const Generator& b) {
  return a.index == b.index && a.sign == b.sign;
}

// A word over the generators. Stored unreduced; reduce() gives the free-group
// normal form.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Generator> letters) : letters_(std::move(letters)) {}

  static Word power(int index, int exponent) {
    std::vector<Generator> ls;
    const int sign = exponent >= 0 ? +1 : -1;
    for (int k = 0; k < (exponent >= 0 ? exponent : -exponent); ++k) ls.push_back({index, sign});
    return Word(std::move(ls));
  }

  const std::vector<Generator>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }

  Word reduce() const {
    std::vector<Generator> out;
    for (const auto& g : letters_) {
      if (!out.empty() && out.back().index == g.index && out.back().sign == -g.sign) {
        out.pop_back();
      } else {
        out.push_back(g);
      }
    }
    return Word(std::move(out));
  }

  Word inverse() const {
    std::vector<Generator> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
    return Word(std::move(out));
  }

  Word operator*(const Word& other) const {
    std::vector<Generator> out = letters_;
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(out));
  }

  Word operator*(const Generator& g) const {
    std::vector<Generator> out = letters_;
    out.push_back(g);
    return Word(std::move(out));
  }

  bool operator==(const Word& other) const { return letters_ == other.letters_; }

  int max_index() const {
    int m = 0;
    for (const auto& g : letters_) m = std::max(m, g.index);
    return m;
  }

 private:
  std::vector<Generator> letters_;
};

// Words on the command line and in reports look like "a1 a2^-1 a3^2".
inline std::string format_word(const Word& w) {
  if (w.empty()) return "e";
  std::ostringstream os;
  const auto& ls = w.letters();
  for (std::size_t i = 0; i < ls.size();) {
    std::size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    const int run = static_cast<int>(j - i);
    if (i > 0) os << ' ';
    os << 'a' << ls[i].index;
    if (ls[i].sign < 0) {
      os << "^-" << run;
    } else if (run > 1) {
      os << '^' << run;
    }
    i = j;
  }
  return os.str();
}

inline Word parse_word(const std::string& text) {
  std::vector<Generator> letters;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok == "e" || tok == "1") continue;  // identity
    if (tok.size() < 2 || tok[0] != 'a') {
      throw std::invalid_argument("bad word token '" + tok + "' (expected e.g. a1, a2^-1, a1^3)");
    }
    std::size_t pos = 1;
    std::size_t caret = tok.find('^');
    const std::string idx_str = tok.substr(pos, (caret == std::string::npos ? tok.size() : caret) - pos);
    int index = 0;
    int exponent = 1;
    try {
      index = std::stoi(idx_str);
      if (caret != std::string::npos) exponent = std::stoi(tok.substr(caret + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad word token '" + tok + "'");
    }
    if (index < 1) throw std::invalid_argument("generator index must be >= 1 in '" + tok + "'");
    const int sign = exponent >= 0 ? +1 : -1;
    for (int k = 0; k < (exponent >= 0 ? exponent : -exponent); ++k) letters.push_back({index, sign});
  }
  return Word(std::move(letters));
}

}  // namespace schreier

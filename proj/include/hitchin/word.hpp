#pragma once

// Words over surface-group generators, canonical conjugacy representatives,
// conjugacy-class enumeration, and Bass-Serre intersection numbers for the
// genus-2 group split along the separating curve c = [a1,b1].

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hitchin/errors.hpp"

namespace hitchin {

// A letter is a signed 1-based generator index; -x is the inverse of x.
// The genus-2 alphabet is {+-1,+-2,+-3,+-4} with 1=a1, 2=b1, 3=a2, 4=b2.
using Letter = std::int8_t;

struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}
  Word(std::initializer_list<int> ls) {
    letters.reserve(ls.size());
    for (int v : ls) letters.push_back(static_cast<Letter>(v));
  }

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  auto operator<=>(const Word&) const = default;

  Word inverse() const {
    Word r;
    r.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      r.letters.push_back(static_cast<Letter>(-*it));
    return r;
  }

  Word concat(const Word& other) const {
    Word r = *this;
    r.letters.insert(r.letters.end(), other.letters.begin(), other.letters.end());
    return r;
  }

  Word power(int n) const {
    Word r;
    r.letters.reserve(letters.size() * static_cast<std::size_t>(n > 0 ? n : 0));
    for (int i = 0; i < n; ++i)
      r.letters.insert(r.letters.end(), letters.begin(), letters.end());
    return r;
  }

  Word rotated(std::size_t k) const {
    if (empty()) return *this;
    k %= size();
    Word r;
    r.letters.reserve(size());
    r.letters.insert(r.letters.end(), letters.begin() + static_cast<std::ptrdiff_t>(k), letters.end());
    r.letters.insert(r.letters.end(), letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k));
    return r;
  }
};

// Compact text form: generator k -> k-th lowercase letter, inverse uppercase.
// "abAB" is a1 b1 a1^-1 b1^-1.
inline std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter l : w.letters) {
    int g = std::abs(static_cast<int>(l));
    char c = static_cast<char>('a' + g - 1);
    s.push_back(l > 0 ? c : static_cast<char>(std::toupper(c)));
  }
  return s;
}

inline Word parse_word(const std::string& s) {
  Word w;
  w.letters.reserve(s.size());
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (std::islower(static_cast<unsigned char>(c)))
      w.letters.push_back(static_cast<Letter>(c - 'a' + 1));
    else if (std::isupper(static_cast<unsigned char>(c)))
      w.letters.push_back(static_cast<Letter>(-(c - 'A' + 1)));
    else
      throw Error("parse_word: bad character in \"" + s + "\"");
  }
  return w;
}

inline Word freely_reduce(const Word& w) {
  Word r;
  r.letters.reserve(w.size());
  for (Letter l : w.letters) {
    if (!r.letters.empty() && r.letters.back() == -l)
      r.letters.pop_back();
    else
      r.letters.push_back(l);
  }
  return r;
}

// Trims cancelling first/last pairs after free reduction; the result generates
// the same conjugacy class.
inline Word cyclically_reduce(const Word& w) {
  Word r = freely_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r.letters[lo] == -r.letters[hi - 1]) {
    ++lo;
    --hi;
  }
  Word out;
  out.letters.assign(r.letters.begin() + static_cast<std::ptrdiff_t>(lo),
                     r.letters.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

inline bool is_cyclically_reduced(const Word& w) {
  if (w.empty()) return true;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w.letters[i] == -w.letters[i + 1]) return false;
  return w.size() < 2 || w.letters.back() != -w.letters.front();
}

struct Presentation {
  int generator_count = 4;
  std::optional<Word> relator;  // disengaged: free group

  static Presentation genus2() {
    Presentation p;
    p.generator_count = 4;
    p.relator = Word{1, 2, -1, -2, 3, 4, -3, -4};
    return p;
  }

  static Presentation free_group(int rank) {
    Presentation p;
    p.generator_count = rank;
    return p;
  }
};

// Amalgam splitting along the separating curve: a1,b1 generate the first
// one-holed torus, a2,b2 the second; the edge group is generated by [a1,b1].
struct Splitting {
  std::array<std::uint8_t, 9> factor{};  // indexed by |letter|
  Word peripheral;

  int factor_of(Letter l) const { return factor[static_cast<std::size_t>(std::abs(static_cast<int>(l)))]; }

  static Splitting genus2_separating() {
    Splitting s;
    s.factor[1] = s.factor[2] = 1;
    s.factor[3] = s.factor[4] = 2;
    s.peripheral = Word{1, 2, -1, -2};
    return s;
  }
};

// Number of alternations between factor syllables in the cyclic syllable
// decomposition of a cyclically reduced word; the Bass-Serre translation
// length when no syllable lies in the edge group.
inline int intersection_number(const Word& w, const Splitting& s) {
  if (w.empty()) return 0;
  int n = 0;
  const std::size_t k = w.size();
  for (std::size_t i = 0; i < k; ++i)
    if (s.factor_of(w.letters[i]) != s.factor_of(w.letters[(i + 1) % k])) ++n;
  return n;
}

// Rewriting data derived from a presentation's relator.  For the genus-2
// relator (length 8, a C'(1/6) presentation) the shrink rules implement
// Dehn reduction (subwords longer than half the relator are replaced by the
// shorter complement) and the swap rules exchange the two half-relator
// spellings of the same group element, e.g. [a1,b1] <-> [b2,a2].
class Canonicalizer {
 public:
  explicit Canonicalizer(const Presentation& p) : pres_(p) {
    if (!p.relator) return;
    Word r = cyclically_reduce(*p.relator);
    const std::size_t L = r.size();
    if (L == 0) return;
    auto add_rules = [&](const Word& rel) {
      for (std::size_t off = 0; off < L; ++off) {
        Word rot = rel.rotated(off);
        for (std::size_t plen = L / 2; plen <= L; ++plen) {
          if (plen == 0 || plen < (L + 1) / 2) continue;
          Word pat, suf;
          pat.letters.assign(rot.letters.begin(), rot.letters.begin() + static_cast<std::ptrdiff_t>(plen));
          suf.letters.assign(rot.letters.begin() + static_cast<std::ptrdiff_t>(plen), rot.letters.end());
          Word rep = suf.inverse();
          if (2 * plen == L)
            swaps_.emplace_back(std::move(pat), std::move(rep));
          else
            shrinks_.emplace_back(std::move(pat), std::move(rep));
        }
      }
    };
    add_rules(r);
    add_rules(r.inverse());
  }

  const Presentation& presentation() const { return pres_; }

  // Dehn reduction of a linear word: freely reduce, replace any subword that
  // is more than half of a relator cycle by the shorter complement, repeat.
  // For a C'(1/6) presentation the result is empty iff w = 1 in the group.
  Word dehn_reduce_linear(Word w) const {
    w = freely_reduce(w);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [pat, rep] : shrinks_) {
        if (pat.size() > w.size()) continue;
        for (std::size_t i = 0; i + pat.size() <= w.size(); ++i) {
          if (std::equal(pat.letters.begin(), pat.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(i))) {
            Word next;
            next.letters.assign(w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(i));
            next.letters.insert(next.letters.end(), rep.letters.begin(), rep.letters.end());
            next.letters.insert(next.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(i + pat.size()),
                                w.letters.end());
            w = freely_reduce(next);
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
    }
    return w;
  }

  bool is_trivial(const Word& w) const { return dehn_reduce_linear(w).empty(); }

  // All equal-length cyclic words reachable from w by rotations and
  // half-relator swaps, after cyclic Dehn reduction to minimal length.
  // Conjugate inputs whose ambiguity is resolved by these moves share a
  // closure; the lexicographic minimum is the canonical representative.
  std::vector<Word> closure(const Word& w) const {
    Word base = cyclically_reduce(w);
    for (;;) {
      base = shrink_cyclic(base);
      if (base.empty()) return {Word{}};
      std::set<Word> seen;
      std::vector<Word> queue;
      const Word* shorter = nullptr;
      auto add = [&](const Word& u) {
        if (seen.insert(u).second) queue.push_back(u);
      };
      add(base);
      Word found_shorter;
      for (std::size_t qi = 0; qi < queue.size() && !shorter; ++qi) {
        Word cur = queue[qi];
        for (std::size_t off = 0; off < cur.size(); ++off) add(cur.rotated(off));
        for (std::size_t off = 0; off < cur.size() && !shorter; ++off) {
          Word rot = cur.rotated(off);
          for (const auto& [pat, rep] : swaps_) {
            if (pat.size() > rot.size()) continue;
            if (!std::equal(pat.letters.begin(), pat.letters.end(), rot.letters.begin())) continue;
            Word next = rep;
            next.letters.insert(next.letters.end(), rot.letters.begin() + static_cast<std::ptrdiff_t>(pat.size()),
                                rot.letters.end());
            next = cyclically_reduce(next);
            if (next.size() < cur.size()) {
              found_shorter = next;
              shorter = &found_shorter;
              break;
            }
            add(next);
          }
        }
      }
      if (!shorter) return {seen.begin(), seen.end()};
      base = found_shorter;
    }
  }

  Word canonical(const Word& w) const {
    auto cl = closure(w);
    return *std::min_element(cl.begin(), cl.end());
  }

  // Intersection number minimized over the closure; invariant under the
  // moves that slide edge-group syllables across the splitting.
  int min_intersection_number(const Word& w, const Splitting& s) const {
    return intersection_number(min_intersection_representative(w, s), s);
  }

  // A closure representative realizing the minimal intersection number,
  // lexicographically first among minimizers.  Evaluating representations on
  // this spelling keeps the factor-alternation count — and with it the
  // cancellation of grafting scales — as small as the class allows.
  Word min_intersection_representative(const Word& w, const Splitting& s) const {
    auto cl = closure(w);
    const Word* best = nullptr;
    int bn = -1;
    for (const Word& u : cl) {
      int n = intersection_number(u, s);
      if (!best || n < bn) {
        best = &u;
        bn = n;
      }
    }
    return best ? *best : Word{};
  }

 private:
  // One pass of cyclic Dehn reduction: match shrink patterns against every
  // rotation, replace, re-reduce, until no pattern fits.
  Word shrink_cyclic(Word w) const {
    bool changed = true;
    while (changed && !w.empty()) {
      changed = false;
      for (std::size_t off = 0; off < w.size() && !changed; ++off) {
        Word rot = w.rotated(off);
        for (const auto& [pat, rep] : shrinks_) {
          if (pat.size() > rot.size()) continue;
          if (!std::equal(pat.letters.begin(), pat.letters.end(), rot.letters.begin())) continue;
          Word next = rep;
          next.letters.insert(next.letters.end(), rot.letters.begin() + static_cast<std::ptrdiff_t>(pat.size()),
                              rot.letters.end());
          w = cyclically_reduce(next);
          changed = true;
          break;
        }
      }
    }
    return w;
  }

  Presentation pres_;
  std::vector<std::pair<Word, Word>> shrinks_;
  std::vector<std::pair<Word, Word>> swaps_;
};

inline Word canonicalize_conjugacy(const Word& w, const Presentation& p) {
  return Canonicalizer(p).canonical(w);
}

// Projected number of freely reduced candidate words the enumerator visits;
// the resource guard compares this against the configured cap.
inline double projected_candidate_count(int rank, int max_len) {
  double a = 2.0 * rank, total = 0.0, cur = a;
  for (int k = 1; k <= max_len; ++k) {
    total += cur;
    cur *= a - 1.0;
  }
  return total;
}

inline constexpr std::uint64_t kDefaultCandidateCap = 10'000'000;

// Depth-first scan of freely reduced words whose first letter is minimal
// among their letters (every cyclically reduced necklace has at least one
// rotation of this form).  The visitor sees push/pop for incremental state
// and leaf(w) exactly at the cyclically reduced candidates.
template <class V>
void scan_cyclic_words(int rank, int max_len, V&& vis) {
  if (max_len < 1) return;
  std::vector<Letter> alpha;
  for (int v = -rank; v <= rank; ++v)
    if (v != 0) alpha.push_back(static_cast<Letter>(v));
  const int A = static_cast<int>(alpha.size());

  std::vector<Letter> w(static_cast<std::size_t>(max_len), 0);
  std::vector<int> slot(static_cast<std::size_t>(max_len), 0);

  for (int fi = 0; fi < A; ++fi) {
    const Letter first = alpha[static_cast<std::size_t>(fi)];
    w[0] = first;
    vis.push(first);
    vis.leaf(std::span<const Letter>(w.data(), 1));
    int depth = 1;  // letters placed
    slot[0] = fi;   // candidate index about to be tried at position `depth`
    if (max_len > 1) slot[1] = fi;
    while (depth >= 1) {
      if (depth == max_len) {
        vis.pop();
        --depth;
        continue;
      }
      bool descended = false;
      for (int j = slot[depth]; j < A; ++j) {
        Letter l = alpha[static_cast<std::size_t>(j)];
        if (l == -w[static_cast<std::size_t>(depth - 1)]) continue;
        slot[depth] = j + 1;
        w[static_cast<std::size_t>(depth)] = l;
        vis.push(l);
        if (l != -first) vis.leaf(std::span<const Letter>(w.data(), static_cast<std::size_t>(depth + 1)));
        ++depth;
        if (depth < max_len) slot[depth] = fi;
        descended = true;
        break;
      }
      if (!descended) {
        vis.pop();
        --depth;
      }
    }
  }
}

// All canonical representatives of nontrivial conjugacy classes with a
// cyclically reduced representative of length <= max_word_len, in
// lexicographic order.  Oriented classes: w and w^-1 are listed separately.
inline std::vector<Word> enumerate_classes(const Presentation& p, int max_word_len,
                                           std::uint64_t candidate_cap = kDefaultCandidateCap) {
  if (max_word_len < 1) throw Error("enumerate_classes: max_word_len must be >= 1");
  if (projected_candidate_count(p.generator_count, max_word_len) > static_cast<double>(candidate_cap))
    throw ResourceCapExceeded("enumerate_classes: projected candidate count exceeds cap");

  Canonicalizer canon(p);
  std::set<Word> classes;
  struct Collector {
    const Canonicalizer& canon;
    std::set<Word>& classes;
    void push(Letter) {}
    void pop() {}
    void leaf(std::span<const Letter> w) {
      Word word;
      word.letters.assign(w.begin(), w.end());
      Word c = canon.canonical(word);
      if (!c.empty()) classes.insert(std::move(c));
    }
  } collector{canon, classes};
  scan_cyclic_words(p.generator_count, max_word_len, collector);
  return {classes.begin(), classes.end()};
}

}  // namespace hitchin

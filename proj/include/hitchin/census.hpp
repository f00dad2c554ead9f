#pragma once

// Conjugacy-class censuses: enumeration with a geometric keep radius,
// canonical-word deduplication, per-label Finsler lengths, intersection
// numbers with the separating curve, spectral fingerprints, completeness
// radii, and CSV (optionally gzip) persistence.

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hitchin/errors.hpp"
#include "hitchin/fuchsian.hpp"
#include "hitchin/lie.hpp"
#include "hitchin/util.hpp"
#include "hitchin/version.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

struct CensusRow {
  Word word;
  int wlen = 0;
  double l_hyp = 0;
  std::vector<double> l_F;  // parallel to Census::labels
  int iota = 0;
  std::string fingerprint;
};

struct Census {
  std::vector<std::string> labels;
  std::vector<double> r_star_label;  // per-label completeness radii
  std::vector<CensusRow> rows;       // sorted by l_hyp, then by word text
  double r_star = 0;                 // completeness radius of the hyperbolic length
  double keep_radius = 0;
  std::string config_hash;
  std::uint64_t seed = 0;
  int fingerprint_collisions = 0;

  int label_index(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    throw Error("census: unknown label '" + label + "'");
  }

  std::size_t count_hyp(double R) const {
    auto it = std::upper_bound(rows.begin(), rows.end(), R,
                               [](double r, const CensusRow& row) { return r < row.l_hyp; });
    return static_cast<std::size_t>(it - rows.begin());
  }
};

struct LabeledRep {
  std::string label;
  RepD rep;
  // For grafted members: the ungrafted base.  Words supported in a single
  // splitting factor are evaluated here — partial conjugation preserves
  // their spectra exactly, while the baked-in conjugation blocks of the
  // effective images (condition ~ e^{2t}) wash out small eigenvalues.
  std::optional<RepD> internal;
};

struct RepFamily {
  SurfaceRep2 fuchsian;  // drives enumeration, hyperbolic lengths, truncation
  std::vector<LabeledRep> members;
};

namespace census_detail {

// Largest R with l >= c*len - b guaranteed by the rows: the last segment of
// the lower convex hull of per-length minima solves the linear program
// max c*n - b subject to c*k - b <= m_k.
struct DisplacementFit {
  double c = 0, b = 0;
  bool valid = false;

  double radius_at(int n) const { return c * n - b; }
};

inline DisplacementFit fit_displacement(const std::map<int, double>& minima) {
  DisplacementFit fit;
  if (minima.empty()) return fit;
  if (minima.size() == 1) {
    auto [k, m] = *minima.begin();
    fit = {m / k, 0.0, true};
    return fit;
  }
  std::vector<std::pair<double, double>> hull;  // lower hull of (k, m_k)
  for (auto [k, m] : minima) {
    std::pair<double, double> p{static_cast<double>(k), m};
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
      if (cross <= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  auto& a = hull[hull.size() - 2];
  auto& b = hull[hull.size() - 1];
  fit.c = (b.second - a.second) / (b.first - a.first);
  fit.b = fit.c * a.first - a.second;
  fit.valid = true;
  return fit;
}

// Minimum hyperbolic length per conjugacy-class length; feeds the
// preliminary keep radius.  Bucketing by canonical length is load-bearing:
// relator remnants spell short classes with long leaves (a seven-letter
// remnant is conjugate to a generator), so free-length minima flatten at the
// systole and a fit through them extrapolates a uselessly small radius.
inline std::map<int, double> class_length_minima(const SurfaceRep2& rep, const Canonicalizer& canon,
                                                 int max_len) {
  struct Visitor {
    const SurfaceRep2& rep;
    const Canonicalizer& canon;
    std::vector<Mat2> stack;
    std::map<int, double>& minima;
    void push(Letter l) { stack.push_back(stack.back() * rep.image(l)); }
    void pop() { stack.pop_back(); }
    void leaf(std::span<const Letter> w) {
      double l = sl2_translation_length(stack.back());
      Word word;
      word.letters.assign(w.begin(), w.end());
      Word cw = canon.canonical(word);
      if (cw.letters.empty()) return;
      auto [it, fresh] = minima.emplace(static_cast<int>(cw.letters.size()), l);
      if (!fresh && l < it->second) it->second = l;
    }
  };
  std::map<int, double> minima;
  Visitor v{rep, canon, {Mat2::identity()}, minima};
  scan_cyclic_words(4, max_len, v);
  return minima;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace census_detail

// Two fixed auxiliary surfaces for spectral fingerprints, derived
// deterministically from the seed.  They need not be discrete; genericity is
// what separates classes.
inline std::array<SurfaceRep2, 2> fingerprint_aux_reps(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> trace(3.2, 6.0);
  std::uniform_real_distribution<double> tw(-1.5, 1.5);
  std::array<SurfaceRep2, 2> out;
  for (auto& rep : out) {
    for (;;) {
      try {
        TorusParams p1{trace(rng), trace(rng), trace(rng)};
        if (p1.boundary_trace() >= -2.5) continue;
        double k = p1.boundary_trace();
        double x = trace(rng), y = trace(rng);
        double disc = x * x * y * y - 4.0 * (x * x + y * y - 2.0 - k);
        if (disc <= 0) continue;
        TorusParams p2{x, y, (x * y - std::sqrt(disc)) / 2.0};
        rep = glue_genus2(p1, p2, tw(rng), 0);
        break;
      } catch (const Error&) {
        continue;
      }
    }
  }
  return out;
}

// Fingerprint: 1e-9-rounded translation lengths under the two auxiliary
// surfaces, an orientation tag, and a hash of the canonical word.  The
// spectral part alone cannot be injective: lengths are inversion-blind, and
// on genus 2 the hyperelliptic involution acts trivially on every character
// variety we can sample, so distinct classes share all auxiliary lengths in
// symmetric pairs.  The tag resolves inversion, the hash the rest.
inline std::string spectral_fingerprint(const Word& canonical_word, const std::array<SurfaceRep2, 2>& aux,
                                        const Canonicalizer& canon) {
  long long a = std::llround(sl2_translation_length(aux[0].evaluate(canonical_word)) * 1e9);
  long long b = std::llround(sl2_translation_length(aux[1].evaluate(canonical_word)) * 1e9);
  Word inv_canon = canon.canonical(canonical_word.inverse());
  char tag = canonical_word == inv_canon ? '0' : (canonical_word < inv_canon ? '+' : '-');
  char buf[96];
  std::snprintf(buf, sizeof buf, "%lld:%lld:%c:%016llx", a, b, tag,
                static_cast<unsigned long long>(fnv1a64(to_string(canonical_word))));
  return buf;
}

inline constexpr double kKeepMargin = 1.5;
inline constexpr std::int64_t kCensusNodeCap = 200'000'000'000;

inline Census build_census(const RepFamily& family, int max_word_len, std::uint64_t seed,
                           const std::string& config_hash = "",
                           std::int64_t node_cap = kCensusNodeCap,
                           double keep_radius_override = 0) {
  if (family.members.empty()) throw Error("build_census: empty representation family");
  bool has_fuchsian = false;
  for (const auto& m : family.members) {
    if (m.label == "fuchsian") has_fuchsian = true;
    if (m.label.find(',') != std::string::npos || m.label.find_first_of(" \t\n") != std::string::npos)
      throw Error("build_census: label must not contain commas or whitespace");
  }
  if (!has_fuchsian) throw Error("build_census: family must designate a 'fuchsian' label");
  if (max_word_len < 1) throw Error("build_census: max_word_len must be >= 1");
  if (projected_candidate_count(4, max_word_len) > node_cap)
    throw ResourceCapExceeded("build_census: projected enumeration exceeds the node cap");

  const SurfaceRep2& base = family.fuchsian;
  Presentation pres = Presentation::genus2();
  Canonicalizer canon(pres);
  Splitting split = Splitting::genus2_separating();

  // Keep radius from a preliminary displacement fit on short classes.
  double keep_radius = keep_radius_override;
  if (keep_radius <= 0) {
    int prelim_len = std::min(max_word_len, 6);
    auto prelim =
        census_detail::fit_displacement(census_detail::class_length_minima(base, canon, prelim_len));
    if (!prelim.valid) throw Error("build_census: preliminary displacement fit failed");
    keep_radius = prelim.radius_at(max_word_len) + kKeepMargin;
  }

  // Main scan: filter leaves by hyperbolic length, dedupe by canonical word.
  struct Collector {
    const SurfaceRep2& rep;
    const Canonicalizer& canon;
    double keep_radius;
    std::vector<Mat2> stack;
    std::unordered_map<std::string, std::pair<Word, double>> classes;
    void push(Letter l) { stack.push_back(stack.back() * rep.image(l)); }
    void pop() { stack.pop_back(); }
    void leaf(std::span<const Letter> w) {
      double l = sl2_translation_length(stack.back());
      if (l > keep_radius) return;
      Word word;
      word.letters.assign(w.begin(), w.end());
      Word cw = canon.canonical(word);
      if (cw.letters.empty()) return;  // trivial class
      std::string key = to_string(cw);
      classes.emplace(std::move(key), std::make_pair(std::move(cw), l));
    }
  };
  Collector collector{base, canon, keep_radius, {Mat2::identity()}, {}};
  scan_cyclic_words(4, max_word_len, collector);

  Census census;
  for (const auto& m : family.members) census.labels.push_back(m.label);
  census.keep_radius = keep_radius;
  census.config_hash = config_hash;
  census.seed = seed;

  auto aux = fingerprint_aux_reps(seed);
  std::vector<JordanEvaluator> evals;
  std::vector<std::optional<JordanEvaluator>> internal_evals;
  std::vector<Alpha0> alphas;
  evals.reserve(family.members.size());
  for (const auto& m : family.members) {
    evals.emplace_back(m.rep);
    internal_evals.emplace_back(m.internal ? std::optional<JordanEvaluator>(JordanEvaluator(*m.internal))
                                           : std::nullopt);
    alphas.push_back(calibrate_alpha0(m.rep.d));
  }
  census.rows.reserve(collector.classes.size());
  for (auto& [text, entry] : collector.classes) {
    CensusRow row;
    row.word = std::move(entry.first);
    row.wlen = static_cast<int>(row.word.letters.size());
    // Re-evaluated on the canonical word: the keep filter measured whichever
    // spelling the scan reached first, and that last-ulp jitter must not
    // decide boundary ties against r_star.
    row.l_hyp = sl2_translation_length(base.evaluate(row.word));
    // Spectra are evaluated on a crossing-minimizing spelling: every factor
    // alternation beyond iota forces grafting scales of the member reps to
    // cancel subtractively, and the canonical (lexicographic) spelling can
    // carry several.  iota == 0 classes are conjugate into one factor, where
    // partial conjugation preserves spectra exactly, so they are routed to
    // the ungrafted internal rep when the member provides one.
    Word eval_word = canon.min_intersection_representative(row.word, split);
    row.iota = intersection_number(eval_word, split);
    row.fingerprint = spectral_fingerprint(row.word, aux, canon);
    row.l_F.reserve(family.members.size());
    bool internal_word = row.iota == 0;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      const JordanEvaluator& ev =
          internal_word && internal_evals[i] ? *internal_evals[i] : evals[i];
      try {
        row.l_F.push_back(ev.length(eval_word, alphas[i]));
      } catch (const EigenFailure& e) {
        throw EigenFailure(std::string(e.what()) + " at word '" + text + "'");
      }
    }
    census.rows.push_back(std::move(row));
  }

  std::sort(census.rows.begin(), census.rows.end(), [](const CensusRow& a, const CensusRow& b) {
    if (a.l_hyp != b.l_hyp) return a.l_hyp < b.l_hyp;
    return to_string(a.word) < to_string(b.word);
  });

  // Completeness radii: hyperbolic via the row fit capped by the keep
  // radius; per label additionally capped through the smallest observed
  // label-to-hyperbolic ratio (classes outside the keep radius can only be
  // longer than that proportion allows).
  std::map<int, double> minima;
  for (const CensusRow& r : census.rows) {
    auto [it, fresh] = minima.emplace(r.wlen, r.l_hyp);
    if (!fresh && r.l_hyp < it->second) it->second = r.l_hyp;
  }
  auto fit = census_detail::fit_displacement(minima);
  census.r_star = fit.valid ? std::min(fit.radius_at(max_word_len), keep_radius) : keep_radius;

  for (std::size_t li = 0; li < census.labels.size(); ++li) {
    std::map<int, double> lm;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const CensusRow& r : census.rows) {
      double l = r.l_F[li];
      auto [it, fresh] = lm.emplace(r.wlen, l);
      if (!fresh && l < it->second) it->second = l;
      if (r.l_hyp > 0 && l > 0) min_ratio = std::min(min_ratio, l / r.l_hyp);
    }
    auto lf = census_detail::fit_displacement(lm);
    double cap = std::isfinite(min_ratio) ? keep_radius * min_ratio : keep_radius;
    census.r_star_label.push_back(lf.valid ? std::min(lf.radius_at(max_word_len), cap) : cap);
  }

  // Fingerprint duplicates are counted, not fatal.
  std::vector<const std::string*> prints;
  prints.reserve(census.rows.size());
  for (const CensusRow& r : census.rows) prints.push_back(&r.fingerprint);
  std::sort(prints.begin(), prints.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
  for (std::size_t i = 1; i < prints.size(); ++i)
    if (*prints[i] == *prints[i - 1]) ++census.fingerprint_collisions;

  return census;
}

// Free two-generator census (subsurface subgroups, pairs of pants); labels
// carry only the defining hyperbolic structure and iota is identically 0.
inline Census build_free_census(const TwoGeneratorRep& rep, int max_word_len, std::uint64_t seed,
                                const std::string& config_hash = "",
                                std::int64_t node_cap = kCensusNodeCap,
                                double keep_radius_override = 0) {
  if (max_word_len < 1) throw Error("build_free_census: max_word_len must be >= 1");
  if (projected_candidate_count(2, max_word_len) > node_cap)
    throw ResourceCapExceeded("build_free_census: projected enumeration exceeds the node cap");

  Presentation pres = Presentation::free_group(2);
  Canonicalizer canon(pres);

  struct MinVisitor {
    const TwoGeneratorRep& rep;
    std::vector<Mat2> stack;
    std::map<int, double>& minima;
    void push(Letter l) {
      const Mat2& g = l == 1 ? rep.A : (l == -1 ? ai : (l == 2 ? rep.B : bi));
      stack.push_back(stack.back() * g);
    }
    void pop() { stack.pop_back(); }
    void leaf(std::span<const Letter> w) {
      double l = sl2_translation_length(stack.back());
      auto [it, fresh] = minima.emplace(static_cast<int>(w.size()), l);
      if (!fresh && l < it->second) it->second = l;
    }
    Mat2 ai, bi;
  };
  double keep_radius = keep_radius_override;
  if (keep_radius <= 0) {
    std::map<int, double> prelim_minima;
    MinVisitor mv{rep, {Mat2::identity()}, prelim_minima, rep.A.inverse(), rep.B.inverse()};
    scan_cyclic_words(2, std::min(max_word_len, 9), mv);
    auto prelim = census_detail::fit_displacement(prelim_minima);
    if (!prelim.valid) throw Error("build_free_census: preliminary displacement fit failed");
    keep_radius = prelim.radius_at(max_word_len) + kKeepMargin;
  }

  struct Collector {
    const TwoGeneratorRep& rep;
    const Canonicalizer& canon;
    double keep_radius;
    std::vector<Mat2> stack;
    std::unordered_map<std::string, std::pair<Word, double>> classes;
    Mat2 ai, bi;
    void push(Letter l) {
      const Mat2& g = l == 1 ? rep.A : (l == -1 ? ai : (l == 2 ? rep.B : bi));
      stack.push_back(stack.back() * g);
    }
    void pop() { stack.pop_back(); }
    void leaf(std::span<const Letter> w) {
      double l = sl2_translation_length(stack.back());
      if (l > keep_radius) return;
      Word word;
      word.letters.assign(w.begin(), w.end());
      Word cw = canon.canonical(word);
      if (cw.letters.empty()) return;
      std::string key = to_string(cw);
      classes.emplace(std::move(key), std::make_pair(std::move(cw), l));
    }
  };
  Collector collector{rep, canon, keep_radius, {Mat2::identity()}, {}, rep.A.inverse(), rep.B.inverse()};
  scan_cyclic_words(2, max_word_len, collector);

  // Fixed generic pants fingerprints, seed-independent geometry is fine here
  // because dedup is exact; the prints only need to be distinct.
  TwoGeneratorRep aux1 = pants_rep(4.1, 3.3, 5.2);
  TwoGeneratorRep aux2 = pants_rep(3.9, 4.7, 3.1);

  Census census;
  census.labels = {"fuchsian"};
  census.keep_radius = keep_radius;
  census.config_hash = config_hash;
  census.seed = seed;

  census.rows.reserve(collector.classes.size());
  for (auto& [text, entry] : collector.classes) {
    CensusRow row;
    row.word = std::move(entry.first);
    row.wlen = static_cast<int>(row.word.letters.size());
    // Canonical-spelling evaluation, as in build_census: boundary ties
    // against r_star must not depend on scan order.
    row.l_hyp = sl2_translation_length(rep.evaluate(row.word));
    row.iota = 0;
    Word inv_canon = canon.canonical(row.word.inverse());
    char tag = row.word == inv_canon ? '0' : (row.word < inv_canon ? '+' : '-');
    long long a = std::llround(sl2_translation_length(aux1.evaluate(row.word)) * 1e9);
    long long b = std::llround(sl2_translation_length(aux2.evaluate(row.word)) * 1e9);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%lld:%lld:%c:%016llx", a, b, tag,
                  static_cast<unsigned long long>(fnv1a64(to_string(row.word))));
    row.fingerprint = buf;
    row.l_F = {row.l_hyp};
    census.rows.push_back(std::move(row));
  }

  std::sort(census.rows.begin(), census.rows.end(), [](const CensusRow& a, const CensusRow& b) {
    if (a.l_hyp != b.l_hyp) return a.l_hyp < b.l_hyp;
    return to_string(a.word) < to_string(b.word);
  });

  std::map<int, double> minima;
  for (const CensusRow& r : census.rows) {
    auto [it, fresh] = minima.emplace(r.wlen, r.l_hyp);
    if (!fresh && r.l_hyp < it->second) it->second = r.l_hyp;
  }
  auto fit = census_detail::fit_displacement(minima);
  census.r_star = fit.valid ? std::min(fit.radius_at(max_word_len), keep_radius) : keep_radius;
  census.r_star_label = {census.r_star};

  std::vector<const std::string*> prints;
  prints.reserve(census.rows.size());
  for (const CensusRow& r : census.rows) prints.push_back(&r.fingerprint);
  std::sort(prints.begin(), prints.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
  for (std::size_t i = 1; i < prints.size(); ++i)
    if (*prints[i] == *prints[i - 1]) ++census.fingerprint_collisions;

  return census;
}

inline std::string census_to_csv(const Census& c) {
  std::string out;
  out += "hitchin-census,v1\n";
  out += "# version=" + std::string(kVersion) + "\n";
  out += "# config_hash=" + c.config_hash + "\n";
  out += "# seed=" + std::to_string(c.seed) + "\n";
  out += "# r_star=" + census_detail::format_double(c.r_star) + "\n";
  out += "# keep_radius=" + census_detail::format_double(c.keep_radius) + "\n";
  out += "# fingerprint_collisions=" + std::to_string(c.fingerprint_collisions) + "\n";
  for (std::size_t i = 0; i < c.labels.size(); ++i)
    out += "# r_star:" + c.labels[i] + "=" + census_detail::format_double(c.r_star_label[i]) + "\n";
  out += "word,wlen,l_hyp";
  for (const auto& l : c.labels) out += ",l_F:" + l;
  out += ",iota,fingerprint\n";
  for (const CensusRow& r : c.rows) {
    out += to_string(r.word);
    out += ',';
    out += std::to_string(r.wlen);
    out += ',';
    out += census_detail::format_double(r.l_hyp);
    for (double l : r.l_F) {
      out += ',';
      out += census_detail::format_double(l);
    }
    out += ',';
    out += std::to_string(r.iota);
    out += ',';
    out += r.fingerprint;
    out += '\n';
  }
  return out;
}

inline bool gzip_path(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

inline void save_census(const Census& c, const std::string& path) {
  std::string body = census_to_csv(c);
  if (gzip_path(path)) {
    gzFile g = gzopen(path.c_str(), "wb");
    if (!g) throw IoError("save_census: cannot open '" + path + "'");
    int n = gzwrite(g, body.data(), static_cast<unsigned>(body.size()));
    gzclose(g);
    if (n != static_cast<int>(body.size())) throw IoError("save_census: short gzip write to '" + path + "'");
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("save_census: cannot open '" + path + "'");
  std::size_t n = std::fwrite(body.data(), 1, body.size(), f);
  std::fclose(f);
  if (n != body.size()) throw IoError("save_census: short write to '" + path + "'");
}

namespace census_detail {

inline std::string read_file(const std::string& path) {
  if (gzip_path(path)) {
    gzFile g = gzopen(path.c_str(), "rb");
    if (!g) throw IoError("load_census: cannot open '" + path + "'");
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(g, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    bool bad = n < 0;
    gzclose(g);
    if (bad) throw IoError("load_census: gzip read error in '" + path + "'");
    return out;
  }
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("load_census: cannot open '" + path + "'");
  std::string out;
  char buf[1 << 16];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace census_detail

inline Census load_census(const std::string& path, const std::string& expected_hash = "", bool strict = false) {
  std::string body = census_detail::read_file(path);
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start < body.size()) {
      std::size_t pos = body.find('\n', start);
      if (pos == std::string::npos) pos = body.size();
      lines.push_back(body.substr(start, pos - start));
      start = pos + 1;
    }
  }
  if (lines.empty() || lines[0] != "hitchin-census,v1")
    throw FormatVersionMismatch("load_census: missing 'hitchin-census,v1' header in '" + path + "'");

  Census c;
  std::map<std::string, double> label_radii;
  std::size_t i = 1;
  for (; i < lines.size() && !lines[i].empty() && lines[i][0] == '#'; ++i) {
    std::string s = lines[i].substr(1);
    std::size_t sp = s.find_first_not_of(' ');
    if (sp != std::string::npos) s = s.substr(sp);
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) continue;
    std::string key = s.substr(0, eq), val = s.substr(eq + 1);
    if (key == "config_hash")
      c.config_hash = val;
    else if (key == "seed")
      c.seed = std::strtoull(val.c_str(), nullptr, 10);
    else if (key == "r_star")
      c.r_star = std::strtod(val.c_str(), nullptr);
    else if (key == "keep_radius")
      c.keep_radius = std::strtod(val.c_str(), nullptr);
    else if (key == "fingerprint_collisions")
      c.fingerprint_collisions = std::atoi(val.c_str());
    else if (key.rfind("r_star:", 0) == 0)
      label_radii[key.substr(7)] = std::strtod(val.c_str(), nullptr);
  }
  if (strict && !expected_hash.empty() && c.config_hash != expected_hash)
    throw ConfigError("load_census: config hash mismatch ('" + c.config_hash + "' vs expected '" + expected_hash +
                      "')");

  if (i >= lines.size()) throw FormatVersionMismatch("load_census: missing column header");
  auto cols = census_detail::split(lines[i], ',');
  if (cols.size() < 5 || cols[0] != "word" || cols[1] != "wlen" || cols[2] != "l_hyp" ||
      cols[cols.size() - 2] != "iota" || cols.back() != "fingerprint")
    throw FormatVersionMismatch("load_census: unexpected column header");
  for (std::size_t j = 3; j + 2 < cols.size(); ++j) {
    if (cols[j].rfind("l_F:", 0) != 0) throw FormatVersionMismatch("load_census: unexpected length column");
    c.labels.push_back(cols[j].substr(4));
  }
  for (const auto& l : c.labels) {
    auto it = label_radii.find(l);
    c.r_star_label.push_back(it == label_radii.end() ? c.r_star : it->second);
  }
  ++i;

  for (; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = census_detail::split(lines[i], ',');
    if (f.size() != 5 + c.labels.size())
      throw FormatVersionMismatch("load_census: bad field count on data line");
    CensusRow row;
    row.word = parse_word(f[0]);
    row.wlen = std::atoi(f[1].c_str());
    row.l_hyp = std::strtod(f[2].c_str(), nullptr);
    for (std::size_t j = 0; j < c.labels.size(); ++j) row.l_F.push_back(std::strtod(f[3 + j].c_str(), nullptr));
    row.iota = std::atoi(f[3 + c.labels.size()].c_str());
    row.fingerprint = f[4 + c.labels.size()];
    c.rows.push_back(std::move(row));
  }
  return c;
}

}  // namespace hitchin

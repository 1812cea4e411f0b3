#pragma once

#include <string>
#include <vector>

#include "opgeom/jets.hpp"

namespace opgeom {

// A cyclic trace word over letters 0..n. Letter k>=1 names the k-th frame
// component of the symbol; letter 0 names the subsymbol slot.
struct TraceWord {
  std::vector<int> letters;

  bool operator==(const TraceWord& o) const { return letters == o.letters; }
  bool operator<(const TraceWord& o) const;
  int length() const { return static_cast<int>(letters.size()); }
};

// lexicographically minimal rotation
TraceWord canonical_form(const TraceWord& w);

// All words over the given letters with 1 <= length <= max_len, one canonical
// representative per cyclic class, sorted by (length, lex).
std::vector<TraceWord> enumerate_trace_words(const std::vector<int>& letters, int max_len);
// convenience: letters {1..alphabet_size}
std::vector<TraceWord> enumerate_trace_words(int alphabet_size, int max_len);

// necklace counting: sum over k<=max_len of (1/k) sum_{d|k} phi(d) a^{k/d}
long necklace_count_sum(int alphabet_size, int max_len);

// e.g. (2,2) -> "Tr(s2^2)", (0,1,1) -> "Tr(s0 s1^2)"
std::string word_label(const TraceWord& w);

// evaluation; mats[k] is the matrix bound to letter k
double trace_word_eval(const TraceWord& w, const std::vector<Mat>& mats);
Jet2 trace_word_eval(const TraceWord& w, const std::vector<JetMat>& mats);

}  // namespace opgeom

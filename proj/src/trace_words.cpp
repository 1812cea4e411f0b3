#include "opgeom/trace_words.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace opgeom {

bool TraceWord::operator<(const TraceWord& o) const {
  if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
  return letters < o.letters;
}

TraceWord canonical_form(const TraceWord& w) {
  const int len = w.length();
  if (len == 0) return w;
  TraceWord best = w;
  TraceWord rot = w;
  for (int r = 1; r < len; ++r) {
    std::rotate(rot.letters.begin(), rot.letters.begin() + 1, rot.letters.end());
    if (rot.letters < best.letters) best = rot;
  }
  return best;
}

std::vector<TraceWord> enumerate_trace_words(const std::vector<int>& letters, int max_len) {
  std::set<TraceWord> out;
  std::vector<int> word;
  const auto grow = [&](auto&& self, int len) -> void {
    if (!word.empty()) out.insert(canonical_form(TraceWord{word}));
    if (len == max_len) return;
    for (int l : letters) {
      word.push_back(l);
      self(self, len + 1);
      word.pop_back();
    }
  };
  grow(grow, 0);
  return {out.begin(), out.end()};
}

std::vector<TraceWord> enumerate_trace_words(int alphabet_size, int max_len) {
  std::vector<int> letters(alphabet_size);
  for (int i = 0; i < alphabet_size; ++i) letters[i] = i + 1;
  return enumerate_trace_words(letters, max_len);
}

namespace {

long euler_phi(long d) {
  long result = d;
  for (long p = 2; p * p <= d; ++p) {
    if (d % p == 0) {
      while (d % p == 0) d /= p;
      result -= result / p;
    }
  }
  if (d > 1) result -= result / d;
  return result;
}

long ipow(long a, long e) {
  long r = 1;
  while (e-- > 0) r *= a;
  return r;
}

}  // namespace

long necklace_count_sum(int alphabet_size, int max_len) {
  long total = 0;
  for (long k = 1; k <= max_len; ++k) {
    long nk = 0;
    for (long d = 1; d <= k; ++d)
      if (k % d == 0) nk += euler_phi(d) * ipow(alphabet_size, k / d);
    total += nk / k;
  }
  return total;
}

std::string word_label(const TraceWord& w) {
  const TraceWord c = canonical_form(w);
  std::string s = "Tr(";
  size_t i = 0;
  while (i < c.letters.size()) {
    size_t j = i;
    while (j < c.letters.size() && c.letters[j] == c.letters[i]) ++j;
    if (i > 0) s += ' ';
    s += 's' + std::to_string(c.letters[i]);
    if (j - i > 1) s += '^' + std::to_string(j - i);
    i = j;
  }
  return s + ")";
}

double trace_word_eval(const TraceWord& w, const std::vector<Mat>& mats) {
  if (w.letters.empty()) throw std::invalid_argument("trace_word_eval: empty word");
  Mat p = mats.at(w.letters[0]);
  for (size_t i = 1; i < w.letters.size(); ++i) p = p * mats.at(w.letters[i]);
  return p.trace();
}

Jet2 trace_word_eval(const TraceWord& w, const std::vector<JetMat>& mats) {
  if (w.letters.empty()) throw std::invalid_argument("trace_word_eval: empty word");
  JetMat p = mats.at(w.letters[0]);
  for (size_t i = 1; i < w.letters.size(); ++i) p = p * mats.at(w.letters[i]);
  return jet_trace(p);
}

}  // namespace opgeom

#ifndef ARTEXPLAIN_TEXTOPS_HPP
#define ARTEXPLAIN_TEXTOPS_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

// Deterministic text primitives shared by the metrics and the dataset
// builder: normalization, tokenization, sentence splitting, LCS and
// entity detection. Everything here is a pure function.

namespace artexplain {

/// A tokenized string. Spans are byte offsets into the string the
/// tokens were produced from (strictly increasing, non-overlapping).
struct TokenSeq {
    std::vector<std::string> tokens;
    std::vector<std::pair<std::size_t, std::size_t>> spans;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
};

struct SentenceSeq {
    std::vector<TokenSeq> sentences;

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& s : sentences) n += s.size();
        return n;
    }
};

namespace detail {

inline void append_utf8(std::string& out, UChar32 cp) {
    icu::UnicodeString u(cp);
    u.toUTF8String(out);
}

// Decodes one code point starting at byte i; advances i.
inline UChar32 next_cp(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) { ++i; return c; }
    int len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : 2;
    UChar32 cp = c & (0x3F >> (len - 1));
    for (int k = 1; k < len && i + k < s.size(); ++k)
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    i += len;
    return cp;
}

inline bool is_space_cp(UChar32 cp) { return u_isUWhiteSpace(cp); }
inline bool is_punct_cp(UChar32 cp) { return u_ispunct(cp); }

}  // namespace detail

/// NFKC + lowercase + whitespace collapse. The canonical form used for
/// entity identity and all token-level matching.
inline std::string normalize_text(std::string_view s) {
    UErrorCode ec = U_ZERO_ERROR;
    const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(ec);
    if (U_FAILURE(ec)) throw std::runtime_error("ICU NFKC unavailable");

    icu::UnicodeString u = icu::UnicodeString::fromUTF8(
        icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    icu::UnicodeString norm = nfkc->normalize(u, ec);
    if (U_FAILURE(ec)) throw std::runtime_error("ICU normalize failed");
    norm.toLower(icu::Locale::getRoot());

    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    bool seen_char = false;
    for (int32_t i = 0; i < norm.length();) {
        UChar32 cp = norm.char32At(i);
        i += U16_LENGTH(cp);
        if (detail::is_space_cp(cp)) {
            pending_space = seen_char;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        seen_char = true;
        detail::append_utf8(out, cp);
    }
    return out;
}

/// Whitespace tokenizer that peels leading/trailing punctuation into
/// separate one-character tokens. Word-internal punctuation (apostrophes,
/// hyphens, dashes) is kept; numerals stay whole.
inline TokenSeq tokenize(std::string_view s) {
    struct Cp {
        UChar32 cp;
        std::size_t begin, end;
    };
    TokenSeq out;
    std::size_t i = 0;
    std::vector<Cp> chunk;
    auto flush = [&]() {
        if (chunk.empty()) return;
        std::size_t lo = 0, hi = chunk.size();
        while (lo < hi && detail::is_punct_cp(chunk[lo].cp)) ++lo;
        while (hi > lo && detail::is_punct_cp(chunk[hi - 1].cp)) --hi;
        auto emit = [&](std::size_t b, std::size_t e) {
            std::string tok;
            for (std::size_t k = b; k < e; ++k) detail::append_utf8(tok, chunk[k].cp);
            out.tokens.push_back(std::move(tok));
            out.spans.emplace_back(chunk[b].begin, chunk[e - 1].end);
        };
        for (std::size_t k = 0; k < lo; ++k) emit(k, k + 1);
        if (lo < hi) emit(lo, hi);
        for (std::size_t k = hi; k < chunk.size(); ++k) emit(k, k + 1);
        chunk.clear();
    };
    while (i < s.size()) {
        std::size_t begin = i;
        UChar32 cp = detail::next_cp(s, i);
        if (detail::is_space_cp(cp)) {
            flush();
        } else {
            chunk.push_back({cp, begin, i});
        }
    }
    flush();
    return out;
}

/// Abbreviations that suppress a sentence break after their period.
/// File format: one lowercase abbreviation (with trailing dot) per line.
class AbbreviationList {
  public:
    AbbreviationList() : set_(kDefaults.begin(), kDefaults.end()) {}

    static AbbreviationList from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open abbreviation list: " + path);
        AbbreviationList out;
        out.set_.clear();
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
            if (!line.empty()) out.set_.insert(line);
        }
        return out;
    }

    bool contains(const std::string& word_with_dot) const {
        return set_.count(word_with_dot) > 0;
    }

  private:
    static inline const std::vector<std::string> kDefaults = {
        "mr.", "mrs.", "ms.", "dr.", "st.", "c.",  "no.",  "prof.",
        "jr.", "sr.",  "vs.", "etc.", "e.g.", "i.e.", "fig.", "ca.",
        "cf.", "vol.", "op.", "d.",   "b.",   "ed.",  "al.",
    };
    std::set<std::string> set_;
};

namespace detail {

// Byte ranges inside short parenthesized spans where splitting is off.
inline std::vector<std::pair<std::size_t, std::size_t>> short_paren_spans(std::string_view s) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '(') continue;
        int depth = 1;
        std::size_t j = i + 1;
        for (; j < s.size() && depth > 0; ++j) {
            if (s[j] == '(') ++depth;
            if (s[j] == ')') --depth;
        }
        if (depth == 0 && j - i < 40) spans.emplace_back(i, j);
    }
    return spans;
}

inline bool in_spans(const std::vector<std::pair<std::size_t, std::size_t>>& spans, std::size_t pos) {
    for (const auto& [b, e] : spans)
        if (pos >= b && pos < e) return true;
    return false;
}

}  // namespace detail

/// Splits raw text into sentence substrings at [.?!] + whitespace +
/// uppercase/digit, honoring the abbreviation stop-list and short
/// parenthesized spans.
inline std::vector<std::string> split_sentence_strings(
    std::string_view s, const AbbreviationList& abbrevs = AbbreviationList()) {
    std::vector<std::string> out;
    auto paren = detail::short_paren_spans(s);
    std::size_t start = 0;
    std::size_t i = 0;
    auto flush = [&](std::size_t end) {
        std::string_view piece = s.substr(start, end - start);
        // trim
        std::size_t b = piece.find_first_not_of(" \t\r\n");
        std::size_t e = piece.find_last_not_of(" \t\r\n");
        if (b != std::string_view::npos) out.emplace_back(piece.substr(b, e - b + 1));
    };
    while (i < s.size()) {
        char c = s[i];
        if (c != '.' && c != '?' && c != '!') { ++i; continue; }
        std::size_t j = i;
        while (j < s.size() && (s[j] == '.' || s[j] == '?' || s[j] == '!')) ++j;
        // must be followed by whitespace then uppercase/digit
        std::size_t k = j;
        while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == '\r' || s[k] == '\n')) ++k;
        bool boundary = k > j && k < s.size();
        if (boundary) {
            std::size_t kk = k;
            UChar32 cp = detail::next_cp(s, kk);
            boundary = u_isupper(cp) || u_isdigit(cp);
        }
        if (boundary && detail::in_spans(paren, i)) boundary = false;
        if (boundary && j == i + 1 && c == '.') {
            // abbreviation check on the word ending at this dot
            std::size_t b = i;
            while (b > start) {
                char p = s[b - 1];
                if (std::isalnum(static_cast<unsigned char>(p)) || p == '.' || p == '\'') --b;
                else break;
            }
            std::string word(s.substr(b, i - b + 1));
            for (auto& ch : word) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (abbrevs.contains(word)) boundary = false;
        }
        if (boundary) {
            flush(j);
            start = k;
            i = k;
        } else {
            i = j;
        }
    }
    if (start < s.size()) flush(s.size());
    return out;
}

/// Sentence segmentation composed with normalization + tokenization,
/// so that concatenated sentence tokens equal tokenize(normalize(s)).
inline SentenceSeq split_sentences(std::string_view s,
                                   const AbbreviationList& abbrevs = AbbreviationList()) {
    SentenceSeq out;
    for (const auto& raw : split_sentence_strings(s, abbrevs)) {
        TokenSeq toks = tokenize(normalize_text(raw));
        if (!toks.empty()) out.sentences.push_back(std::move(toks));
    }
    return out;
}

/// Longest common subsequence length, O(|a|*|b|) with two rows.
inline std::size_t lcs_len(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) cur[j] = prev[j - 1] + 1;
            else cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::size_t lcs_len(const TokenSeq& a, const TokenSeq& b) {
    return lcs_len(a.tokens, b.tokens);
}

/// Per-article detection vocabulary: normalized entity surfaces with
/// their token forms. Construction normalizes, deduplicates and sorts.
class EntityInventory {
  public:
    EntityInventory() = default;

    /// Builds from already-normalized, deduplicated surfaces.
    static EntityInventory from_normalized(std::vector<std::string> surfaces) {
        std::sort(surfaces.begin(), surfaces.end());
        surfaces.erase(std::unique(surfaces.begin(), surfaces.end()), surfaces.end());
        EntityInventory inv;
        for (auto& s : surfaces) {
            if (s.empty()) continue;
            TokenSeq t = tokenize(s);
            if (t.empty()) continue;
            inv.by_first_[t.tokens.front()].push_back(inv.entries_.size());
            inv.entries_.push_back({std::move(s), std::move(t.tokens)});
        }
        for (auto& [_, idxs] : inv.by_first_) {
            std::sort(idxs.begin(), idxs.end(), [&](std::size_t x, std::size_t y) {
                return inv.entries_[x].tokens.size() > inv.entries_[y].tokens.size();
            });
        }
        return inv;
    }

    struct Entry {
        std::string surface;                // normalized form, canonical id
        std::vector<std::string> tokens;
    };

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    bool contains(const std::string& normalized_surface) const {
        for (const auto& e : entries_)
            if (e.surface == normalized_surface) return true;
        return false;
    }

    /// Candidate entries whose first token is `tok`, longest first.
    const std::vector<std::size_t>* candidates(const std::string& tok) const {
        auto it = by_first_.find(tok);
        return it == by_first_.end() ? nullptr : &it->second;
    }

  private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
};

struct EntityHit {
    std::string entity;          // canonical normalized surface
    std::size_t sentence_index;
    std::size_t token_start;     // global token index across sentences
};

/// Greedy longest-match, left-to-right, non-overlapping scan. Matches
/// never cross sentence boundaries.
inline std::vector<EntityHit> detect_entities(const SentenceSeq& text,
                                              const EntityInventory& inventory) {
    std::vector<EntityHit> hits;
    if (inventory.empty()) return hits;
    std::size_t global = 0;
    for (std::size_t si = 0; si < text.sentences.size(); ++si) {
        const auto& toks = text.sentences[si].tokens;
        std::size_t p = 0;
        while (p < toks.size()) {
            const auto* cands = inventory.candidates(toks[p]);
            std::size_t matched = 0;
            const EntityInventory::Entry* best = nullptr;
            if (cands) {
                for (std::size_t idx : *cands) {
                    const auto& e = inventory.entries()[idx];
                    if (p + e.tokens.size() > toks.size()) continue;
                    if (std::equal(e.tokens.begin(), e.tokens.end(), toks.begin() + p)) {
                        best = &e;
                        matched = e.tokens.size();
                        break;  // candidates are longest-first
                    }
                }
            }
            if (best) {
                hits.push_back({best->surface, si, global + p});
                p += matched;
            } else {
                ++p;
            }
        }
        global += toks.size();
    }
    return hits;
}

/// Single-sentence convenience overload.
inline std::vector<EntityHit> detect_entities(const TokenSeq& text,
                                              const EntityInventory& inventory) {
    SentenceSeq seq;
    seq.sentences.push_back(text);
    return detect_entities(seq, inventory);
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_TEXTOPS_HPP

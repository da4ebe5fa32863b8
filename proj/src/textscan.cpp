#include "somascope/textscan.hpp"

#include <array>

namespace somascope {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed
};

CodePoint decode_at(std::string_view s, std::size_t i) noexcept {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (i + len > s.size()) return {0xFFFD, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t c) noexcept {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) noexcept {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x3001: case 0x3002: case 0x300C: case 0x300D:
      return true;
    default:
      return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) || (c >= 0xFF01 && c <= 0xFF0F);
  }
}

// Lowercases ASCII and the Latin-1 uppercase block (U+00C0..U+00DE except U+00D7).
std::string lowercase(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto &c = out[i];
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    } else if (static_cast<unsigned char>(c) == 0xC3 && i + 1 < out.size()) {
      const auto next = static_cast<unsigned char>(out[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) out[i + 1] = static_cast<char>(next + 0x20);
      ++i;
    }
  }
  return out;
}

void push_token(std::string_view text, std::size_t begin, std::size_t end, std::vector<Token> &out) {
  // Strip punctuation outside-in, one code point at a time.
  while (begin < end) {
    const auto cp = decode_at(text, begin);
    if (!is_punct(cp.value)) break;
    begin += cp.length;
  }
  while (end > begin) {
    auto lead = end - 1;
    while (lead > begin && (static_cast<unsigned char>(text[lead]) & 0xC0) == 0x80) --lead;
    const auto cp = decode_at(text, lead);
    if (lead + cp.length != end) {
      // Malformed tail: treat the final byte as its own code point.
      if (!is_punct(static_cast<unsigned char>(text[end - 1]))) break;
      --end;
      continue;
    }
    if (!is_punct(cp.value)) break;
    end = lead;
  }
  if (begin < end) out.push_back(Token{lowercase(text.substr(begin, end - begin)), begin, end});
}

constexpr std::array<std::string_view, kPossessionCount> kPossessionNames = {"none", "my", "your",
                                                                            "his",  "her", "their"};

}  // namespace

std::string_view possession_name(Possession p) noexcept { return kPossessionNames[static_cast<std::size_t>(p)]; }

std::optional<Possession> possessive_pronoun(std::string_view token) noexcept {
  for (std::size_t i = 1; i < kPossessionCount; ++i) {
    if (kPossessionNames[i] == token) return static_cast<Possession>(i);
  }
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t word_start = std::string_view::npos;
  while (i < text.size()) {
    const auto cp = decode_at(text, i);
    if (is_space(cp.value)) {
      if (word_start != std::string_view::npos) {
        push_token(text, word_start, i, tokens);
        word_start = std::string_view::npos;
      }
    } else if (word_start == std::string_view::npos) {
      word_start = i;
    }
    i += cp.length;
  }
  if (word_start != std::string_view::npos) push_token(text, word_start, text.size(), tokens);
  return tokens;
}

std::size_t count_code_points(std::string_view text) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); i += decode_at(text, i).length) ++n;
  return n;
}

std::vector<BpmSpan> detect_bpms(const std::vector<Token> &tokens, const BodyPartLexicon &lex) {
  std::vector<BpmSpan> spans;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (auto canonical = lex.canonical(tokens[i].text)) {
      spans.push_back(BpmSpan{i, tokens[i].text, std::string(*canonical), Possession::none});
    }
  }
  return spans;
}

void classify_possession(const std::vector<Token> &tokens, std::vector<BpmSpan> &spans) {
  for (auto &span : spans) {
    span.possession = Possession::none;
    if (span.token_index == 0 || span.token_index > tokens.size()) continue;
    if (auto p = possessive_pronoun(tokens[span.token_index - 1].text)) span.possession = *p;
  }
}

InstanceAnnotation annotate_tokens(std::string_view id, std::string_view text, const std::vector<Token> &tokens,
                                   const Lexicons &lex) {
  InstanceAnnotation ann;
  ann.instance_id = id;
  ann.token_count = tokens.size();
  ann.char_count = count_code_points(text);
  if (lex.body_parts != nullptr) {
    ann.spans = detect_bpms(tokens, *lex.body_parts);
    classify_possession(tokens, ann.spans);
  }
  ann.has_bpm = !ann.spans.empty();
  for (const auto &span : ann.spans) {
    if (span.possession != Possession::none) ann.possession_flags |= possession_bit(span.possession);
  }
  for (const auto &tok : tokens) {
    if (lex.emotions != nullptr) ann.emotion_hits |= lex.emotions->lookup(tok.text);
    if (lex.vad != nullptr) ann.vad_hits |= lex.vad->poles(tok.text);
  }
  return ann;
}

InstanceAnnotation annotate_instance(std::string_view id, std::string_view text, const Lexicons &lex) {
  return annotate_tokens(id, text, tokenize(text), lex);
}

}  // namespace somascope

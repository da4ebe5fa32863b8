#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "somascope/lexicon.hpp"

namespace somascope {

struct Token {
  std::string text;  // lowercased, outer punctuation stripped
  std::size_t start = 0;
  std::size_t end = 0;  // byte offsets into the original text, [start, end)

  friend bool operator==(const Token &, const Token &) = default;
};

/// Possessive context of a body-part mention.
enum class Possession : std::uint8_t { none, my, your, his, her, their };
inline constexpr std::size_t kPossessionCount = 6;

using PossessionSet = std::uint8_t;  // bit i set <=> Possession(i), never bit 0

[[nodiscard]] std::string_view possession_name(Possession p) noexcept;
[[nodiscard]] std::optional<Possession> possessive_pronoun(std::string_view token) noexcept;
[[nodiscard]] constexpr PossessionSet possession_bit(Possession p) noexcept {
  return static_cast<PossessionSet>(1U << static_cast<unsigned>(p));
}

struct BpmSpan {
  std::size_t token_index = 0;
  std::string surface;
  std::string canonical;
  Possession possession = Possession::none;

  friend bool operator==(const BpmSpan &, const BpmSpan &) = default;
};

struct InstanceAnnotation {
  std::string instance_id;
  std::vector<BpmSpan> spans;
  bool has_bpm = false;
  PossessionSet possession_flags = 0;
  EmotionSet emotion_hits = 0;
  VadPoleSet vad_hits = 0;
  std::size_t token_count = 0;
  std::size_t char_count = 0;  // Unicode code points

  [[nodiscard]] bool possessed(Possession p) const noexcept { return (possession_flags & possession_bit(p)) != 0; }

  friend bool operator==(const InstanceAnnotation &, const InstanceAnnotation &) = default;
};

/// Splits on Unicode whitespace, strips outer punctuation (which removes
/// hashtag/mention sigils), lowercases, and drops empty tokens.
[[nodiscard]] std::vector<Token> tokenize(std::string_view text);

/// Number of UTF-8 code points; stray continuation bytes count individually.
[[nodiscard]] std::size_t count_code_points(std::string_view text) noexcept;

/// One span per token found in the lexicon, in token order, possession unset.
[[nodiscard]] std::vector<BpmSpan> detect_bpms(const std::vector<Token> &tokens, const BodyPartLexicon &lex);

/// Sets each span's possession from the token immediately before it.
void classify_possession(const std::vector<Token> &tokens, std::vector<BpmSpan> &spans);

struct Lexicons {
  const BodyPartLexicon *body_parts = nullptr;
  const EmotionLexicon *emotions = nullptr;  // optional
  const VadLexicon *vad = nullptr;           // optional
};

/// Annotates an already-tokenized instance.
[[nodiscard]] InstanceAnnotation annotate_tokens(std::string_view id, std::string_view text,
                                                 const std::vector<Token> &tokens, const Lexicons &lex);

[[nodiscard]] InstanceAnnotation annotate_instance(std::string_view id, std::string_view text, const Lexicons &lex);

}  // namespace somascope

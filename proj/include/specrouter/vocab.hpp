#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace specrouter {

using TokenId = int32_t;
using TokenSeq = std::vector<TokenId>;

// Character-level vocabulary with reserved bos/eos markers.
// Ids are dense 0..V-1; bos=0, eos=1, then the unit symbols in sorted order.
class Vocabulary {
  public:
    // One vocabulary entry per distinct character in `alphabet` (duplicates
    // collapse, order normalizes to ascending byte value).
    static Vocabulary from_chars(std::string_view alphabet);

    int size() const { return static_cast<int>(symbols_.size()); }
    TokenId bos_id() const { return 0; }
    TokenId eos_id() const { return 1; }

    const std::string& symbol(TokenId id) const;
    TokenId id_of(std::string_view symbol) const;  // throws on unknown symbol
    bool contains(std::string_view symbol) const;

    // Character text -> ids. Unknown characters throw.
    TokenSeq encode(std::string_view text) const;
    // Ids -> text. bos renders as nothing; decoding stops after eos.
    std::string decode(const TokenSeq& tokens) const;

    bool operator==(const Vocabulary& other) const { return symbols_ == other.symbols_; }

  private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, TokenId> index_;
};

}  // namespace specrouter

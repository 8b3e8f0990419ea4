#include "specrouter/vocab.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace specrouter {

Vocabulary Vocabulary::from_chars(std::string_view alphabet) {
    if (alphabet.empty())
        throw std::invalid_argument("vocabulary alphabet must be non-empty");
    std::set<char> chars(alphabet.begin(), alphabet.end());
    Vocabulary v;
    v.symbols_.reserve(chars.size() + 2);
    v.symbols_.push_back("<s>");
    v.symbols_.push_back("</s>");
    for (char c : chars) v.symbols_.emplace_back(1, c);
    for (size_t i = 0; i < v.symbols_.size(); ++i)
        v.index_.emplace(v.symbols_[i], static_cast<TokenId>(i));
    return v;
}

const std::string& Vocabulary::symbol(TokenId id) const {
    if (id < 0 || id >= size())
        throw std::out_of_range("token id out of range");
    return symbols_[static_cast<size_t>(id)];
}

TokenId Vocabulary::id_of(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end())
        throw std::invalid_argument("unknown symbol: " + std::string(symbol));
    return it->second;
}

bool Vocabulary::contains(std::string_view symbol) const {
    return index_.find(std::string(symbol)) != index_.end();
}

TokenSeq Vocabulary::encode(std::string_view text) const {
    TokenSeq out;
    out.reserve(text.size());
    for (char c : text) out.push_back(id_of(std::string_view(&c, 1)));
    return out;
}

std::string Vocabulary::decode(const TokenSeq& tokens) const {
    std::string out;
    for (TokenId t : tokens) {
        if (t == eos_id()) break;
        if (t == bos_id()) continue;
        out += symbol(t);
    }
    return out;
}

}  // namespace specrouter

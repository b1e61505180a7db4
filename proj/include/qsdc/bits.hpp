#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qsdc {

/// A classical bit string. Element values are 0 or 1.
using Bits = std::vector<std::uint8_t>;

inline std::string bits_to_string(const Bits& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline void require_bits(const Bits& bits, const char* what) {
    for (auto b : bits)
        if (b > 1) throw std::invalid_argument(std::string(what) + ": elements must be 0 or 1");
}

inline Bits bits_from_string(std::string_view s) {
    Bits bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c == '0') {
            bits.push_back(0);
        } else if (c == '1') {
            bits.push_back(1);
        } else {
            throw std::invalid_argument("bits_from_string: invalid character '" +
                                        std::string(1, c) + "'");
        }
    }
    return bits;
}

}  // namespace qsdc

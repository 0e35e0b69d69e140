#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace driftbudget {

// Bit string of fixed length n. Values are stored one byte per bit and
// restricted to {0,1}; out-of-range indices and non-bit values throw.
class BitString {
public:
    explicit BitString(int n) : bits_(check_length(n), 0) {}

    BitString(int n, const std::vector<std::uint8_t>& values) : bits_(values) {
        if (n < 1 || static_cast<std::size_t>(n) != values.size())
            throw std::invalid_argument("BitString: length mismatch");
        for (std::uint8_t v : bits_)
            if (v > 1) throw std::invalid_argument("BitString: values must be 0 or 1");
    }

    int size() const { return static_cast<int>(bits_.size()); }

    bool test(int i) const { return bits_[checked(i)] != 0; }

    void set(int i, bool value) { bits_[checked(i)] = value ? 1 : 0; }

    void flip(int i) { bits_[checked(i)] ^= 1; }

    const std::vector<std::uint8_t>& raw() const { return bits_; }

    bool operator==(const BitString& other) const { return bits_ == other.bits_; }

private:
    static int check_length(int n) {
        if (n < 1) throw std::invalid_argument("BitString: length must be positive");
        return n;
    }

    std::size_t checked(int i) const {
        if (i < 0 || static_cast<std::size_t>(i) >= bits_.size())
            throw std::out_of_range("BitString: index out of range");
        return static_cast<std::size_t>(i);
    }

    std::vector<std::uint8_t> bits_;
};

} // namespace driftbudget

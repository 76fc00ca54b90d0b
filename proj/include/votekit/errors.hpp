#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace votekit {

// Malformed input, violated precondition, or arithmetic overflow.
// The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// All score arithmetic is exact; overflow is a hard error, never wraparound.
inline long long checked_add(long long a, long long b) {
    long long out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw InputError("integer overflow in weight/score arithmetic");
    return out;
}

inline long long checked_mul(long long a, long long b) {
    long long out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw InputError("integer overflow in weight/score arithmetic");
    return out;
}

} // namespace votekit

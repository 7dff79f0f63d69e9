#pragma once

#include <string>

#include "ubqc/errors.hpp"

namespace ubqc {

enum class PauliLetter { I, X, Y, Z };

// Product up to phase: the Pauli group modulo its centre.
inline PauliLetter pauli_mul(PauliLetter a, PauliLetter b) {
    if (a == PauliLetter::I) return b;
    if (b == PauliLetter::I) return a;
    if (a == b) return PauliLetter::I;
    // the remaining letter
    int sum = static_cast<int>(a) + static_cast<int>(b); // X=1,Y=2,Z=3: pairs sum to 3,4,5
    return static_cast<PauliLetter>(6 - sum);
}

inline bool pauli_anticommutes(PauliLetter a, PauliLetter b) {
    return a != PauliLetter::I && b != PauliLetter::I && a != b;
}

inline char pauli_char(PauliLetter p) {
    switch (p) {
        case PauliLetter::I: return 'I';
        case PauliLetter::X: return 'X';
        case PauliLetter::Y: return 'Y';
        case PauliLetter::Z: return 'Z';
    }
    return '?';
}

inline PauliLetter pauli_from_char(char c) {
    switch (c) {
        case 'I': return PauliLetter::I;
        case 'X': return PauliLetter::X;
        case 'Y': return PauliLetter::Y;
        case 'Z': return PauliLetter::Z;
    }
    throw ConfigError(std::string("not a Pauli letter: ") + c);
}

} // namespace ubqc

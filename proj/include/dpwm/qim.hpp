#pragma once

#include <cstdint>

namespace dpwm::qim {

/// Two interleaved cosets with step M: bit 1 at M/4 + kM, bit 0 at -M/4 + kM.
/// Decoding is correct whenever the host value moves by less than M/4.
class BinaryLattice {
public:
    explicit BinaryLattice(double step);

    double step() const noexcept { return step_; }

    /// Nearest center of the bit's coset.
    double embed(double delta, int bit) const;

    /// Label of the globally nearest center; exact midpoints decode as 1.
    int extract(double delta) const;

private:
    double step_;
};

/// Centers qN labeled by q mod 3 mapped to {0,+1,-1}. Decoding is correct
/// whenever the host value moves by less than N/2.
class TernaryLattice {
public:
    explicit TernaryLattice(double step);

    double step() const noexcept { return step_; }

    double embed(double delta, int symbol) const;

    /// Label of round(delta/N), halves rounded toward +infinity.
    int extract(double delta) const;

private:
    double step_;
};

// Free-function forms.
double embed_binary(double delta, int bit, double m);
int extract_binary(double delta, double m);
double embed_ternary(double delta, int symbol, double n);
int extract_ternary(double delta, double n);

} // namespace dpwm::qim

#include "dpwm/qim.hpp"

#include <cmath>
#include <string>

#include "dpwm/error.hpp"

namespace dpwm::qim {

namespace {

double check_step(double step, const char* name)
{
    if (!(step > 0.0) || !std::isfinite(step))
        throw ParameterError(std::string(name) + " must be a positive finite strength");
    return step;
}

double round_half_up(double x) { return std::floor(x + 0.5); }

} // namespace

BinaryLattice::BinaryLattice(double step) : step_(check_step(step, "M")) {}

double BinaryLattice::embed(double delta, int bit) const
{
    if (bit != 0 && bit != 1)
        throw ParameterError("binary symbol must be 0 or 1");
    const double offset = bit ? step_ / 4.0 : -step_ / 4.0;
    return offset + step_ * round_half_up((delta - offset) / step_);
}

int BinaryLattice::extract(double delta) const
{
    const double to_one = std::abs(delta - embed(delta, 1));
    const double to_zero = std::abs(delta - embed(delta, 0));
    return to_one <= to_zero ? 1 : 0;
}

TernaryLattice::TernaryLattice(double step) : step_(check_step(step, "N")) {}

double TernaryLattice::embed(double delta, int symbol) const
{
    if (symbol < -1 || symbol > 1)
        throw ParameterError("ternary symbol must be -1, 0 or +1");
    const double q = symbol + 3.0 * round_half_up((delta / step_ - symbol) / 3.0);
    return q * step_;
}

int TernaryLattice::extract(double delta) const
{
    const auto q = static_cast<long long>(round_half_up(delta / step_));
    const long long r = ((q % 3) + 3) % 3;
    return r == 2 ? -1 : static_cast<int>(r);
}

double embed_binary(double delta, int bit, double m) { return BinaryLattice(m).embed(delta, bit); }
int extract_binary(double delta, double m) { return BinaryLattice(m).extract(delta); }
double embed_ternary(double delta, int symbol, double n) { return TernaryLattice(n).embed(delta, symbol); }
int extract_ternary(double delta, double n) { return TernaryLattice(n).extract(delta); }

} // namespace dpwm::qim

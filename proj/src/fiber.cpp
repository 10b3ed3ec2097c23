#include "heatrange/fiber.hpp"
#include "heatrange/numerics.hpp"

#include <cmath>

namespace heatrange {

double fiber_gaussian(Duality d, double t, double rho)
{
    double sign = d == Duality::compact ? -1.0 : 1.0;
    return std::exp(sign * t / 2 - rho * rho / (2 * t)) * std::pow(2 * kPi * t, -1.5);
}

double fiber_jacobian(Duality d, double rho)
{
    return d == Duality::compact ? sinh_over_x(rho) : sin_over_x(rho);
}

double inversion_density(Duality d, double t, double rho)
{
    return fiber_gaussian(d, t, rho) * fiber_jacobian(d, rho);
}

double isometry_density(Duality d, double t, double rho)
{
    // Same kernel at time 2t and radius 2 rho, with the 2^3 from dY -> d(2Y).
    return 8.0 * inversion_density(d, 2 * t, 2 * rho);
}

double FiberDensity::operator()(FiberRole role, double rho) const
{
    bool inv = (role == FiberRole::inversion) != swapped;
    return inv ? inversion_density(duality, t, rho) : isometry_density(duality, t, rho);
}

}  // namespace heatrange

#pragma once

// Fiber measures shared by S^3 and H^3. The two geometries use the same
// formulas with sinh and sin exchanged and the sign of the exponential
// prefactor flipped.

namespace heatrange {

enum class Duality { compact, noncompact };

enum class FiberRole { inversion, isometry };

struct FiberDensity {
    Duality duality = Duality::compact;
    double t = 1.0;
    // Negative control: use the kernel belonging to the other role.
    bool swapped = false;

    // Density with respect to Lebesgue measure dY on the 3-dimensional fiber,
    // at |Y| = rho.
    double operator()(FiberRole role, double rho) const;
};

// e^{-+t/2} e^{-rho^2/2t} (2 pi t)^{-3/2}
double fiber_gaussian(Duality d, double t, double rho);
// (sinh|sin)(rho)/rho
double fiber_jacobian(Duality d, double rho);
// fiber_gaussian * fiber_jacobian
double inversion_density(Duality d, double t, double rho);
// e^{-+t} (sinh|sin)(2 rho)/(2 rho) e^{-rho^2/t} (pi t)^{-3/2}
double isometry_density(Duality d, double t, double rho);

}  // namespace heatrange

// Measures the best approximation constant of the golden ratio against
// psi(q) = q^-2 and compares it with 1/sqrt(5), the worst constant any
// irrational admits. The golden ratio attains it, so the windowed minimum
// of |phi - p/q| / psi(q) over certified convergents should land on
// 1/sqrt(5) from below and the running-min trace should flatten there.

#include <dioph/dirichlet.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>

int main() {
    using namespace dioph;

    const RealInterval phi = RealInterval::golden_ratio(256);
    const PsiSpec psi = PowerLawPsi{2.0};
    const BigInt q_max = 2000000;  // covers the first thirty convergents

    // Per-convergent ratios q^2 |phi - p/q|, certified from the enclosure.
    // They oscillate around the limit, odd steps below and even above.
    const ContinuedFraction cf = expand_real(phi, 18);
    const auto cv = convergents(cf);
    std::cout << "Approximation constant of the golden ratio, psi(q) = q^-2\n\n";
    std::cout << std::setw(4) << "n" << std::setw(10) << "q"
              << std::setw(18) << "q^2 |phi - p/q|" << '\n';
    for (const Convergent& c : cv) {
        const RealInterval err = phi.abs_distance(c.value());
        const double ratio =
            static_cast<double>(BigRat(err.hi() * c.q * c.q));
        std::cout << std::setw(4) << c.index << std::setw(10) << c.q
                  << std::setw(18) << std::fixed << std::setprecision(9)
                  << ratio << '\n';
    }

    const std::vector<RealInterval> x{phi};
    const CEstimateReport rep = estimate_C(x, HeightKind::Max, psi, q_max);
    std::cout << "\nwindow: [" << rep.window_lo << ", " << rep.window_hi
              << "], certified candidates: " << rep.tuples
              << " (" << rep.in_window << " in window)\n";

    const double c_est = static_cast<double>(rep.c_min);
    const double c_ref = 1.0 / std::sqrt(5.0);
    std::cout << '\n' << std::setprecision(12)
              << "windowed C estimate: " << c_est
              << "  (attained at height " << rep.best.height << ")\n"
              << "1/sqrt(5)          : " << c_ref << '\n'
              << "difference         : " << std::scientific
              << std::setprecision(3) << c_est - c_ref << '\n';

    // The estimate lives on convergents of phi, so it cannot drift far from
    // the limit; fail loudly if it somehow does.
    if (std::abs(c_est - c_ref) > 1e-3) {
        std::cerr << "estimate is off by more than 1e-3\n";
        return 1;
    }
    return 0;
}

#pragma once

#include "revscatter/geometry.hpp"
#include "revscatter/numerics.hpp"

namespace revscatter {

struct RealZeroDetected : NumericsError {
    using NumericsError::NumericsError;
};
struct SuspectedMultipleZero : NumericsError {
    using NumericsError::NumericsError;
};

// Jost function psi(k) = f_+(0,k) for -y'' + p y = k^2 y on the half-line,
// f_+(x,k) = e^{ikx} for x >= 1. One backward RK4 sweep per k. Guaranteed
// accuracy inside the strip |Im k| <= 30; evaluation stays finite well below.
class JostEvaluator {
  public:
    explicit JostEvaluator(Potential p, int base_steps = 4096);

    const Potential& potential() const { return p_; }
    int base_steps() const { return base_steps_; }

    Complex value(Complex k) const { return value(k, steps_for(k)); }
    Complex value(Complex k, int steps) const;

    // psi'(k) by central differences.
    Complex derivative(Complex k) const;

    // f_+(x_j, k) on the potential grid (used for norming integrals).
    std::vector<Complex> solution_samples(Complex k) const;

    // 4096 per unit interval up to |k| = 50, scaled linearly above.
    int steps_for(Complex k) const;

  private:
    Potential p_;
    int base_steps_;
    std::vector<double> p_mid_;  // midpoint samples for the RK4 half-steps
};

struct BoundStateList {
    std::vector<double> kappas;  // decreasing tau_j, k_j = i tau_j
    int n_plus = 0;

    std::vector<double> energies() const;
};

// All zeros of tau -> psi(i tau) on (0, tau_max], sorted decreasing.
BoundStateList bound_states(const JostEvaluator& ev, double tau_max);

struct ScatteringData {
    std::vector<double> k_grid;   // positive, ascending
    std::vector<Complex> s;       // S(k) = psi(-k)/psi(k)
    std::vector<double> phase;    // phi_sc, unwrapped, -> 0 at large k
    int n0 = 0;
};

ScatteringData s_matrix(const JostEvaluator& ev, std::vector<double> k_grid);

struct JostDiagnostics {
    double sup_k_times_psi_minus_1 = 0.0;  // sup |k (psi(k)-1)| on [10, 200]
    double type_estimate = 0.0;            // log|psi(-iT)| / T
    double conj_symmetry_residual = 0.0;   // max |psi(-conj k) - conj psi(k)|
};

JostDiagnostics jost_integral_form(const JostEvaluator& ev, double T = 20.0);

// Closed form for p = c * chi_[0,1]: psi(k) = e^{ik}(cos w - (ik/w) sin w),
// w = sqrt(k^2 - c). Test oracle; also used by the CLI verify fixtures.
Complex square_well_jost(double c, Complex k);

}  // namespace revscatter

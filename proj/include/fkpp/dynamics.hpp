#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fkpp/kpp.hpp"
#include "fkpp/operator.hpp"

namespace fkpp {

struct SimConfig {
    double dt = 0.01;
    double t_max = 100.0;
    double steady_tol = 1e-8;       ///< sup-norm rate threshold
    double extinction_tol = 1e-6;   ///< sup-norm threshold
    int snapshot_stride = 50;       ///< steps between recorded snapshots
};

enum class Outcome { Extinct, Steady, HorizonReached };
enum class Monotonicity { Nonincreasing, Nondecreasing, Neither };

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    Outcome outcome = Outcome::HorizonReached;
    Field final_state;
    double final_time = 0.0;
    Monotonicity monotone_flag = Monotonicity::Neither;
    double steady_residual = 0.0;  ///< ||L u + f(.,u)||_inf for Steady outcomes
    std::vector<std::string> warnings;
};

/// One IMEX Euler step: (I - dt (Delta^s + c d/dx)) u+ = u + dt f(x, u).
/// The implicit part is the transport operator only; any potential carried by
/// `op` stays out (the reaction owns a). Zero exterior during evolution.
class ImexStepper {
public:
    ImexStepper(const NonlocalOperator& op, const Nonlinearity& nl, double dt);
    ~ImexStepper();
    ImexStepper(ImexStepper&&) noexcept;

    /// Reaction coefficient shift in nodes (frame-equivalence runs).
    Field step(const Field& u, int coeff_shift = 0) const;

    double dt() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// March until extinction, steady state (rate below steady_tol for 10
/// consecutive steps) or the horizon.
Trajectory evolve(const NonlocalOperator& op, const Nonlinearity& nl,
                  const Field& u0, const SimConfig& cfg);

struct FrameCheck {
    double gap = 0.0;       ///< sup over recorded times of the shifted mismatch
    int steps = 0;
    double dt = 0.0;
};

/// Fixed-frame (shifted coefficient) vs moving-frame (drift c) solutions,
/// compared as v(x + c t) against u_c(x) on the common interior window.
/// Requires commensurate stepping c dt = h.
FrameCheck frame_equivalence_check(const Grid& grid, OperatorSpec spec,
                                   const Nonlinearity& nl, const Field& u0,
                                   double c, double T, int edge_margin = 0);

} // namespace fkpp

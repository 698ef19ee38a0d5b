#ifndef HAWKES_KERNEL_HPP
#define HAWKES_KERNEL_HPP

#include <vector>

namespace hawkes {

enum class KernelType { Zero, Exponential, Erlang, Tabulated };

// Excitation kernel Phi together with its resolvent psi = sum_n Phi^(*n).
// Exponential and Erlang kernels carry closed forms; tabulated kernels are
// piecewise linear on their grid (zero beyond it) and solve the renewal
// identity psi = Phi + Phi*psi numerically at construction.
//
// Construction enforces the stability condition ||Phi||_1 < 1 and the
// parameter ranges alpha < beta (exponential) and alpha < beta^2 (Erlang);
// violations throw std::invalid_argument. Instances are immutable and safe
// to share across threads.
class Kernel {
  public:
    static Kernel zero();
    static Kernel exponential(double alpha, double beta);
    static Kernel erlang(double alpha, double beta);
    // psi_step / psi_horizon <= 0 pick defaults from the grid and the
    // contraction factor ||Phi||_1.
    static Kernel tabulated(std::vector<double> grid, std::vector<double> values,
                            double psi_step = 0.0, double psi_horizon = 0.0);

    KernelType type() const { return type_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    // Phi(t); throws std::domain_error for t < 0.
    double phi(double t) const;

    // \int_0^t Phi(u) du, exact for the closed-form kernels.
    double phi_integral(double t) const;

    // ||Phi||_1, in [0,1).
    double phi_l1() const { return phi_l1_; }

    // Resolvent psi(t); throws std::domain_error for t < 0.
    double psi(double t) const;

    // ||psi||_1 = ||Phi||_1 / (1 - ||Phi||_1), exact.
    double psi_l1() const;

    // Largest value of Phi over [a, b] with 0 <= a <= b; used by the
    // piecewise-constant thinning majorant.
    double phi_sup(double a, double b) const;

    // Time beyond which Phi vanishes (infinity for the closed forms).
    double support_end() const;

    // Uniform grid the tabulated resolvent lives on (empty otherwise).
    const std::vector<double>& psi_grid() const { return psi_grid_; }
    const std::vector<double>& psi_values() const { return psi_values_; }

    // Tabulated kernel data (empty for the closed forms).
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    // Refresh interval of the piecewise-constant thinning majorant:
    // 0.1/beta for Erlang, the smallest grid step for tabulated kernels.
    double majorant_window() const;

  private:
    Kernel() = default;

    KernelType type_ = KernelType::Zero;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double phi_l1_ = 0.0;
    // Tabulated data (piecewise linear).
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> cum_integral_;  // \int_0^{grid_[i]} Phi
    std::vector<double> psi_grid_;
    std::vector<double> psi_values_;
    double psi_step_ = 0.0;
};

}  // namespace hawkes

#endif

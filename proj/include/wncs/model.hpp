#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "wncs/matrix.hpp"
#include "wncs/rng.hpp"

namespace wncs {

/**
 * Constants of one control loop: plant x[k+1] = A x[k] + B u[k] + e[k],
 * control law u[k] = K xhat[k], LQ weights Q (state) and P (input), and the
 * diagonal noise covariance R. The initial state x0 is known at the
 * controller.
 */
struct SubsystemSpec {
    int index = 0;
    Mat A = Mat::identity(1);
    Mat B = Mat::identity(1);
    Mat K = Mat::zeros(1, 1);
    Mat Q = Mat::identity(1);
    Mat P = Mat::identity(1);
    Mat R = Mat::zeros(1, 1);
    Vec x0 = Vec(1, 0.0);

    std::size_t dim() const { return A.rows(); }

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    bool operator==(const SubsystemSpec&) const = default;
};

/// Evolving per-loop state.
struct SubsystemRuntime {
    Vec x;     // actual plant state
    Vec xhat;  // controller-side estimate
    Vec xopt;  // ideal-communication reference, re-anchored at each reception
    Vec u;     // last applied control

    static SubsystemRuntime initial(const SubsystemSpec& spec);
};

/// i.i.d. zero-mean Gaussian vectors with diagonal covariance R.
class NoiseSource {
public:
    NoiseSource(const Mat& covariance, Engine engine);

    Vec draw();

private:
    std::vector<double> stddev_;
    Engine engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

Vec control(const SubsystemSpec& spec, std::span<const double> xhat);

Vec step_plant(const SubsystemSpec& spec, std::span<const double> x, std::span<const double> u,
               std::span<const double> e);

/// Returns the received state if present, else coasts with (A + BK).
Vec step_estimator(const SubsystemSpec& spec, std::span<const double> xhat_prev,
                   const std::optional<Vec>& received);

Mat closed_loop_matrix(const SubsystemSpec& spec);

/// Ideal reference: re-anchors to the actual state on reception, otherwise
/// evolves under perfect communication with the same noise realization.
Vec step_ideal(const SubsystemSpec& spec, std::span<const double> xopt_prev,
               std::span<const double> e, const std::optional<Vec>& reanchor);

/**
 * Closed form of the state `delta` slots after a reception of x_anchor:
 * (A+BK)^delta x_anchor + sum_{j<delta} A^j e[k-j-1].
 * noise_window is ordered oldest first: e[k-delta], ..., e[k-1].
 */
Vec state_after_coasting(const SubsystemSpec& spec, std::span<const double> x_anchor,
                     std::span<const Vec> noise_window, unsigned delta);

}  // namespace wncs

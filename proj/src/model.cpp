#include "wncs/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wncs {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(got) +
                                    " does not match state dimension " + std::to_string(want));
    }
}

}  // namespace

void SubsystemSpec::validate() const {
    const std::size_t n = A.rows();
    const std::string who = "subsystem " + std::to_string(index);
    auto square_n = [&](const Mat& m, const char* name) {
        if (m.rows() != n || m.cols() != n) {
            throw std::invalid_argument(who + ": " + name + " must be " + std::to_string(n) + "x" +
                                        std::to_string(n));
        }
    };
    if (!A.is_square()) throw std::invalid_argument(who + ": A must be square");
    square_n(B, "B");
    square_n(K, "K");
    square_n(Q, "Q");
    square_n(P, "P");
    square_n(R, "R");
    if (!is_symmetric(Q)) throw std::invalid_argument(who + ": Q must be symmetric");
    if (!is_symmetric(P)) throw std::invalid_argument(who + ": P must be symmetric");
    for (std::size_t d = 0; d < n; ++d) {
        if (Q(d, d) < 0.0) throw std::invalid_argument(who + ": Q must be positive semidefinite");
        if (P(d, d) < 0.0) throw std::invalid_argument(who + ": P must be positive semidefinite");
    }
    if (!is_diagonal(R)) throw std::invalid_argument(who + ": R must be diagonal");
    for (std::size_t d = 0; d < n; ++d) {
        if (R(d, d) < 0.0) throw std::invalid_argument(who + ": R entries must be nonnegative");
    }
    require_dim(x0.size(), n, "x0");
    for (double v : x0) {
        if (!std::isfinite(v)) throw std::invalid_argument(who + ": x0 must be finite");
    }
}

SubsystemRuntime SubsystemRuntime::initial(const SubsystemSpec& spec) {
    SubsystemRuntime rt;
    rt.x = spec.x0;
    rt.xhat = spec.x0;
    rt.xopt = spec.x0;
    rt.u = control(spec, rt.xhat);
    return rt;
}

NoiseSource::NoiseSource(const Mat& covariance, Engine engine) : engine_(std::move(engine)) {
    if (!is_diagonal(covariance)) throw std::invalid_argument("noise covariance must be diagonal");
    stddev_.reserve(covariance.rows());
    for (std::size_t d = 0; d < covariance.rows(); ++d) {
        if (covariance(d, d) < 0.0) throw std::invalid_argument("noise variance must be nonnegative");
        stddev_.push_back(std::sqrt(covariance(d, d)));
    }
}

Vec NoiseSource::draw() {
    Vec e(stddev_.size());
    for (std::size_t d = 0; d < e.size(); ++d) e[d] = stddev_[d] * normal_(engine_);
    return e;
}

Vec control(const SubsystemSpec& spec, std::span<const double> xhat) {
    require_dim(xhat.size(), spec.dim(), "control");
    return mat_vec(spec.K, xhat);
}

Vec step_plant(const SubsystemSpec& spec, std::span<const double> x, std::span<const double> u,
               std::span<const double> e) {
    require_dim(x.size(), spec.dim(), "step_plant x");
    require_dim(u.size(), spec.B.cols(), "step_plant u");
    require_dim(e.size(), spec.dim(), "step_plant e");
    return vec_add(vec_add(mat_vec(spec.A, x), mat_vec(spec.B, u)), e);
}

Vec step_estimator(const SubsystemSpec& spec, std::span<const double> xhat_prev,
                   const std::optional<Vec>& received) {
    require_dim(xhat_prev.size(), spec.dim(), "step_estimator");
    if (received) {
        require_dim(received->size(), spec.dim(), "step_estimator received");
        return *received;
    }
    return mat_vec(closed_loop_matrix(spec), xhat_prev);
}

Mat closed_loop_matrix(const SubsystemSpec& spec) { return mat_add(spec.A, mat_mul(spec.B, spec.K)); }

Vec step_ideal(const SubsystemSpec& spec, std::span<const double> xopt_prev,
               std::span<const double> e, const std::optional<Vec>& reanchor) {
    require_dim(xopt_prev.size(), spec.dim(), "step_ideal");
    require_dim(e.size(), spec.dim(), "step_ideal e");
    if (reanchor) {
        require_dim(reanchor->size(), spec.dim(), "step_ideal reanchor");
        return *reanchor;
    }
    return vec_add(mat_vec(closed_loop_matrix(spec), xopt_prev), e);
}

Vec state_after_coasting(const SubsystemSpec& spec, std::span<const double> x_anchor,
                         std::span<const Vec> noise_window, unsigned delta) {
    require_dim(x_anchor.size(), spec.dim(), "state_after_coasting");
    if (noise_window.size() != delta) {
        throw std::invalid_argument("state_after_coasting: noise window length " +
                                    std::to_string(noise_window.size()) + " != delta " +
                                    std::to_string(delta));
    }
    Vec x = mat_vec(mat_pow(closed_loop_matrix(spec), delta), x_anchor);
    Mat a_pow = Mat::identity(spec.dim());
    // j-th term uses e[k-j-1], i.e. noise_window[delta-1-j].
    for (unsigned j = 0; j < delta; ++j) {
        const Vec& e = noise_window[delta - 1 - j];
        require_dim(e.size(), spec.dim(), "state_after_coasting noise");
        x = vec_add(x, mat_vec(a_pow, e));
        a_pow = mat_mul(a_pow, spec.A);
    }
    return x;
}

}  // namespace wncs

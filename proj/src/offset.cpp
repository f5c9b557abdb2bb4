#include "wncs/offset.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace wncs {

namespace {

double weighted_gram_trace(const Mat& weight, const Mat& d, const Mat& r) {
    return trace(mat_mul(weight, mat_mul(mat_mul(d, r), transpose(d))));
}

std::size_t checked_age(std::int64_t age) {
    if (age < 0) throw std::invalid_argument("age must be nonnegative, got " + std::to_string(age));
    return static_cast<std::size_t>(age);
}

}  // namespace

Mat offset_quadratic_weight(const SubsystemSpec& spec) {
    return mat_add(spec.Q, mat_mul(transpose(spec.K), mat_mul(spec.P, spec.K)));
}

double offset_weight(const SubsystemSpec& spec, unsigned j) {
    const Mat d = mat_sub(mat_pow(spec.A, j), mat_pow(closed_loop_matrix(spec), j));
    return weighted_gram_trace(offset_quadratic_weight(spec), d, spec.R);
}

Vec state_offset_closed_form(const SubsystemSpec& spec, std::span<const Vec> noise_window,
                             unsigned delta) {
    if (noise_window.size() != delta) {
        throw std::invalid_argument("state_offset_closed_form: noise window length " +
                                    std::to_string(noise_window.size()) + " != delta " +
                                    std::to_string(delta));
    }
    const Mat cl = closed_loop_matrix(spec);
    Mat a_pow = Mat::identity(spec.dim());
    Mat cl_pow = Mat::identity(spec.dim());
    Vec out(spec.dim(), 0.0);
    for (unsigned j = 0; j < delta; ++j) {
        const Vec& e = noise_window[delta - 1 - j];
        out = vec_add(out, mat_vec(mat_sub(a_pow, cl_pow), e));
        a_pow = mat_mul(a_pow, spec.A);
        cl_pow = mat_mul(cl_pow, cl);
    }
    return out;
}

double expected_estimation_error(const SubsystemSpec& spec, unsigned delta) {
    Mat a_pow = Mat::identity(spec.dim());
    double sum = 0.0;
    for (unsigned j = 0; j <= delta; ++j) {
        sum += trace(mat_mul(mat_mul(a_pow, spec.R), transpose(a_pow)));
        a_pow = mat_mul(a_pow, spec.A);
    }
    return sum;
}

OffsetWeightTable::OffsetWeightTable(std::vector<SubsystemSpec> specs) {
    loops_.reserve(specs.size());
    for (auto& s : specs) {
        s.validate();
        const std::size_t n = s.dim();
        Mat cl = closed_loop_matrix(s);
        Mat wm = offset_quadratic_weight(s);
        loops_.push_back(Loop{std::move(s), std::move(cl), std::move(wm), Mat::identity(n),
                              Mat::identity(n), {}, {0.0}, {0.0}, false});
    }
}

const SubsystemSpec& OffsetWeightTable::spec(std::size_t i) const {
    if (i >= loops_.size()) {
        throw std::out_of_range("OffsetWeightTable: subsystem index " + std::to_string(i) +
                                " out of range (N=" + std::to_string(loops_.size()) + ")");
    }
    return loops_[i].spec;
}

OffsetWeightTable::Loop& OffsetWeightTable::loop(std::size_t i) {
    spec(i);
    return loops_[i];
}

void OffsetWeightTable::extend(Loop& l, std::size_t ages) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    while (l.w.size() < ages) {
        if (l.saturated) {
            l.w.push_back(inf);
            l.w_sum.push_back(inf);
            l.v_sum.push_back(inf);
            continue;
        }
        try {
            const Mat d = mat_sub(l.a_pow, l.cl_pow);
            const double w = weighted_gram_trace(l.weight_matrix, d, l.spec.R);
            const double v = trace(mat_mul(mat_mul(l.a_pow, l.spec.R), transpose(l.a_pow)));
            Mat a_next = mat_mul(l.a_pow, l.spec.A);
            Mat cl_next = mat_mul(l.cl_pow, l.closed_loop);
            l.w.push_back(w);
            l.w_sum.push_back(l.w_sum.back() + w);
            l.v_sum.push_back(l.v_sum.back() + v);
            l.a_pow = std::move(a_next);
            l.cl_pow = std::move(cl_next);
        } catch (const std::overflow_error&) {
            // Unstable open loop at an age beyond double range.
            l.saturated = true;
        }
    }
}

double OffsetWeightTable::weight(std::size_t i, std::int64_t j) {
    Loop& l = loop(i);
    const std::size_t age = checked_age(j);
    extend(l, age + 1);
    return l.w[age];
}

double OffsetWeightTable::cumulative_offset(std::size_t i, std::int64_t delta) {
    Loop& l = loop(i);
    const std::size_t d = checked_age(delta);
    extend(l, d);
    return l.w_sum[d];
}

double OffsetWeightTable::predicted_offset(std::size_t i, std::int64_t delta) {
    return cumulative_offset(i, checked_age(delta) + 1);
}

double OffsetWeightTable::estimation_error(std::size_t i, std::int64_t delta) {
    Loop& l = loop(i);
    const std::size_t d = checked_age(delta) + 1;
    extend(l, d);
    return l.v_sum[d];
}

std::size_t OffsetWeightTable::cached(std::size_t i) const {
    spec(i);
    return loops_[i].w.size();
}

}  // namespace wncs

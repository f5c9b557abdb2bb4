#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wncs/matrix.hpp"
#include "wncs/model.hpp"

namespace wncs {

/**
 * Offset weight of age j:
 *   w(j) = Tr{ (Q + K^T P K) D_j R D_j^T },  D_j = A^j - (A+BK)^j.
 *
 * This is the expected quadratic penalty contributed by the noise sample
 * injected j slots before the current one, when the controller has been
 * coasting. Computed directly from matrix powers, without caching.
 */
double offset_weight(const SubsystemSpec& spec, unsigned j);

/// Sum_{j<delta} (A^j - (A+BK)^j) e[k-j-1], noise_window oldest first.
Vec state_offset_closed_form(const SubsystemSpec& spec, std::span<const Vec> noise_window,
                             unsigned delta);

/// Sum_{j<=delta} Tr(A^j R (A^j)^T): expected squared estimation error one
/// slot ahead if the loop is not updated now.
double expected_estimation_error(const SubsystemSpec& spec, unsigned delta);

/// Q + K^T P K, the quadratic weight seen by the state offset.
Mat offset_quadratic_weight(const SubsystemSpec& spec);

/**
 * Lazily grown per-loop tables of offset weights w_i[j] and estimation-error
 * weights v_i[j] = Tr(A^j R A^jT), with prefix sums. Powers of A and A+BK
 * are extended incrementally, so querying age d costs O(d) once and O(1)
 * afterwards. Ages whose weights overflow double range read as +inf.
 *
 * Not thread-safe: queries may extend the cache.
 */
class OffsetWeightTable {
public:
    explicit OffsetWeightTable(std::vector<SubsystemSpec> specs);

    std::size_t size() const { return loops_.size(); }
    const SubsystemSpec& spec(std::size_t i) const;

    double weight(std::size_t i, std::int64_t j);

    /// Sum_{j<delta} w_i[j]; realized per-slot offset at age delta.
    double cumulative_offset(std::size_t i, std::int64_t delta);

    /// Sum_{j<=delta} w_i[j] = cumulative_offset(i, delta + 1).
    double predicted_offset(std::size_t i, std::int64_t delta);

    /// Sum_{j<=delta} v_i[j].
    double estimation_error(std::size_t i, std::int64_t delta);

    /// Number of cached ages for loop i.
    std::size_t cached(std::size_t i) const;

private:
    struct Loop {
        SubsystemSpec spec;
        Mat closed_loop;
        Mat weight_matrix;  // Q + K^T P K
        Mat a_pow;          // A^(next j)
        Mat cl_pow;         // (A+BK)^(next j)
        std::vector<double> w;
        std::vector<double> w_sum;  // w_sum[d] = sum_{j<d} w[j]; w_sum[0] = 0
        std::vector<double> v_sum;  // v_sum[d] = sum_{j<d} v[j]
        bool saturated;             // powers left double range; later ages are +inf
    };

    Loop& loop(std::size_t i);
    void extend(Loop& l, std::size_t ages);

    std::vector<Loop> loops_;
};

}  // namespace wncs

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wncs {

using Vec = std::vector<double>;

/**
 * Small dense real matrix, row-major.
 *
 * Every constructor and every arithmetic result is checked for finite
 * entries; operations whose result overflows throw std::overflow_error.
 */
class Mat {
public:
    Mat(std::size_t rows, std::size_t cols);
    Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(std::size_t n);
    static Mat zeros(std::size_t rows, std::size_t cols);
    static Mat diagonal(std::span<const double> diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> entries() const { return data_; }

    bool operator==(const Mat&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
Mat scalar_mul(double c, const Mat& a);
Mat transpose(const Mat& a);

/// a^j by iterated multiplication; a^0 is the identity.
Mat mat_pow(const Mat& a, unsigned j);

double trace(const Mat& a);

/// True when a is square and a(r,c) == a(c,r) exactly.
bool is_symmetric(const Mat& a);
bool is_diagonal(const Mat& a);

Vec mat_vec(const Mat& a, std::span<const double> x);
Vec vec_add(std::span<const double> a, std::span<const double> b);
Vec vec_sub(std::span<const double> a, std::span<const double> b);

/// x^T W x
double quad_form(const Mat& w, std::span<const double> x);

}  // namespace wncs

#include "wncs/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wncs {

namespace {

void require_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::overflow_error("matrix entry is not finite");
        }
    }
}

void require_same_shape(const Mat& a, const Mat& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

void require_square(const Mat& a, const char* op) {
    if (!a.is_square()) {
        throw std::invalid_argument(std::string(op) + ": matrix is not square");
    }
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols) : Mat(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) {
        throw std::invalid_argument("matrix dimensions must be positive");
    }
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("matrix entry count does not match dimensions");
    }
    require_finite(data_);
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) {
        throw std::invalid_argument("matrix dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw std::invalid_argument("ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite(data_);
}

Mat Mat::identity(std::size_t n) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
    return Mat(n, n, std::move(d));
}

Mat Mat::zeros(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }

Mat Mat::diagonal(std::span<const double> diag) {
    const std::size_t n = diag.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = diag[i];
    return Mat(n, n, std::move(d));
}

Mat mat_mul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("mat_mul: inner dimensions differ (" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + ")");
    }
    std::vector<double> out(a.rows() * b.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double ark = a(r, k);
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out[r * b.cols() + c] += ark * b(k, c);
            }
        }
    }
    return Mat(a.rows(), b.cols(), std::move(out));
}

Mat mat_add(const Mat& a, const Mat& b) {
    require_same_shape(a, b, "mat_add");
    std::vector<double> out(a.entries().begin(), a.entries().end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.entries()[i];
    return Mat(a.rows(), a.cols(), std::move(out));
}

Mat mat_sub(const Mat& a, const Mat& b) {
    require_same_shape(a, b, "mat_sub");
    std::vector<double> out(a.entries().begin(), a.entries().end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.entries()[i];
    return Mat(a.rows(), a.cols(), std::move(out));
}

Mat scalar_mul(double c, const Mat& a) {
    std::vector<double> out(a.entries().begin(), a.entries().end());
    for (double& x : out) x *= c;
    return Mat(a.rows(), a.cols(), std::move(out));
}

Mat transpose(const Mat& a) {
    std::vector<double> out(a.rows() * a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) out[c * a.rows() + r] = a(r, c);
    }
    return Mat(a.cols(), a.rows(), std::move(out));
}

Mat mat_pow(const Mat& a, unsigned j) {
    require_square(a, "mat_pow");
    Mat out = Mat::identity(a.rows());
    for (unsigned step = 0; step < j; ++step) out = mat_mul(out, a);
    return out;
}

double trace(const Mat& a) {
    require_square(a, "trace");
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

bool is_symmetric(const Mat& a) {
    if (!a.is_square()) return false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = r + 1; c < a.cols(); ++c) {
            if (a(r, c) != a(c, r)) return false;
        }
    }
    return true;
}

bool is_diagonal(const Mat& a) {
    if (!a.is_square()) return false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (r != c && a(r, c) != 0.0) return false;
        }
    }
    return true;
}

Vec mat_vec(const Mat& a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("mat_vec: dimension mismatch (" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(x.size()) + ")");
    }
    Vec out(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < a.cols(); ++c) s += a(r, c) * x[c];
        out[r] = s;
    }
    return out;
}

Vec vec_add(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_add: dimension mismatch");
    Vec out(a.begin(), a.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Vec vec_sub(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_sub: dimension mismatch");
    Vec out(a.begin(), a.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

double quad_form(const Mat& w, std::span<const double> x) {
    const Vec wx = mat_vec(w, x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * wx[i];
    return s;
}

}  // namespace wncs

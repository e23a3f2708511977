#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace fvlab {

using Vec = std::vector<double>;

// Dense row-major matrix. Dimensions here are tiny (diffusion coefficient
// blocks), so no effort is made to be clever.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    void resize(int r, int c) {
        rows = r;
        cols = c;
        data.assign(static_cast<size_t>(r) * c, 0.0);
    }

    void set_identity(double scale = 1.0) {
        for (auto& v : data) v = 0.0;
        for (int i = 0; i < rows && i < cols; ++i) (*this)(i, i) = scale;
    }

    static Mat identity(int n, double scale = 1.0) {
        Mat m(n, n);
        m.set_identity(scale);
        return m;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// y += M x
inline void mat_vec_add(const Mat& m, const Vec& x, Vec& y) {
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] += s;
    }
}

// v' (M M*) v
inline double quadratic_form_mmt(const Mat& m, const Vec& v) {
    // w = M* v, result = w.w
    double out = 0.0;
    for (int j = 0; j < m.cols; ++j) {
        double w = 0.0;
        for (int i = 0; i < m.rows; ++i) w += m(i, j) * v[static_cast<size_t>(i)];
        out += w * w;
    }
    return out;
}

inline double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (double v : m.data) s += v * v;
    return std::sqrt(s);
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Sample mean and standard error (sd / sqrt(n)).
inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr r;
    const size_t n = xs.size();
    if (n == 0) return r;
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(n);
    r.mean = m;
    if (n < 2) return r;
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double var = ss / static_cast<double>(n - 1);
    r.stderr_ = std::sqrt(var / static_cast<double>(n));
    return r;
}

}  // namespace fvlab

#pragma once
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace c2f {

// Dense row-major double tensor. Shapes are small here; everything is
// 64-bit for exact reproducibility.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> v;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        v.assign(numel(shape), 0.0);
    }

    static std::size_t numel(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) {
            if (d <= 0) throw std::invalid_argument("Tensor: nonpositive dim");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::size_t size() const { return v.size(); }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }
};

inline bool same_shape(const Tensor& a, const Tensor& b) { return a.shape == b.shape; }

inline std::string shape_str(const std::vector<int>& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += "x";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

}  // namespace c2f

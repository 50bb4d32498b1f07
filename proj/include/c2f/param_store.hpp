#pragma once
#include <map>
#include <stdexcept>
#include <string>

#include "c2f/tensor.hpp"

namespace c2f {

// Named parameter tensors with paired gradient buffers of identical shape.
// Ordered by name so every traversal (optimizer, checkpoint, hashing) is
// deterministic.
class ParamStore {
  public:
    struct Param {
        Tensor value;
        Tensor grad;
    };

    Tensor& add(const std::string& name, std::vector<int> shape) {
        if (params_.count(name)) throw std::invalid_argument("ParamStore: duplicate " + name);
        Param p;
        p.value = Tensor(shape);
        p.grad = Tensor(shape);
        auto [it, ok] = params_.emplace(name, std::move(p));
        (void)ok;
        return it->second.value;
    }

    bool has(const std::string& name) const { return params_.count(name) != 0; }

    Param& at(const std::string& name) {
        auto it = params_.find(name);
        if (it == params_.end()) throw std::invalid_argument("ParamStore: missing " + name);
        return it->second;
    }
    const Param& at(const std::string& name) const {
        auto it = params_.find(name);
        if (it == params_.end()) throw std::invalid_argument("ParamStore: missing " + name);
        return it->second;
    }

    Tensor& value(const std::string& name) { return at(name).value; }
    const Tensor& value(const std::string& name) const { return at(name).value; }
    Tensor& grad(const std::string& name) { return at(name).grad; }
    const Tensor& grad(const std::string& name) const { return at(name).grad; }

    void zero_grads() {
        for (auto& [k, p] : params_) p.grad.fill(0.0);
    }

    std::size_t count() const { return params_.size(); }

    std::size_t total_values() const {
        std::size_t n = 0;
        for (const auto& [k, p] : params_) n += p.value.size();
        return n;
    }

    auto begin() { return params_.begin(); }
    auto end() { return params_.end(); }
    auto begin() const { return params_.begin(); }
    auto end() const { return params_.end(); }

  private:
    std::map<std::string, Param> params_;
};

}  // namespace c2f

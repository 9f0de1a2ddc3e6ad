#ifndef SFCMFG_TYPES_HPP
#define SFCMFG_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfcmfg {

// Capacity / demand triple: compute, storage, transmission (abstract units).
struct ResourceVector {
    double compute = 0.0;
    double storage = 0.0;
    double transmission = 0.0;

    double component(int c) const {
        switch (c) {
            case 0: return compute;
            case 1: return storage;
            case 2: return transmission;
        }
        throw std::out_of_range("ResourceVector component index");
    }
    double& component(int c) {
        switch (c) {
            case 0: return compute;
            case 1: return storage;
            case 2: return transmission;
        }
        throw std::out_of_range("ResourceVector component index");
    }

    bool nonnegative() const {
        return compute >= 0.0 && storage >= 0.0 && transmission >= 0.0;
    }

    ResourceVector& operator+=(const ResourceVector& o) {
        compute += o.compute;
        storage += o.storage;
        transmission += o.transmission;
        return *this;
    }
    ResourceVector& operator-=(const ResourceVector& o) {
        compute -= o.compute;
        storage -= o.storage;
        transmission -= o.transmission;
        return *this;
    }
    friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }

    // a <= b component-wise
    bool fits_within(const ResourceVector& cap) const {
        return compute <= cap.compute && storage <= cap.storage && transmission <= cap.transmission;
    }

    friend bool operator==(const ResourceVector&, const ResourceVector&) = default;
};

inline constexpr int kResourceComponents = 3;

struct Violation {
    std::string code;     // short machine-readable tag, e.g. "unknown-vnf"
    std::string message;  // human-readable detail
};

// Empty report means the checked object is well-formed.
struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string code, std::string message) {
        violations.push_back({std::move(code), std::move(message)});
    }
    std::string to_string() const;
};

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EnumerationBoundExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace sfcmfg

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace pdi {

/// Input outside an operation's domain. CLI exit code 2.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured size or work cap would be exceeded. CLI exit code 3.
class resource_cap_error : public std::runtime_error {
public:
    explicit resource_cap_error(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive refinement stopped before reaching its tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw precondition_error(what);
}

} // namespace pdi

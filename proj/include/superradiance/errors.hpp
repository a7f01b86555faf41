#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace superradiance {

/// Raised when a physical parameter violates its domain. `field()` names the offender.
class parameter_error : public std::invalid_argument {
public:
    parameter_error(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Step-size underflow or a non-finite state during ODE integration.
/// Carries the last accepted time and state (as angles where applicable).
class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, double last_t, double last_theta, double last_phi)
        : std::runtime_error(what), last_t_(last_t), last_theta_(last_theta), last_phi_(last_phi) {}

    double last_t() const noexcept { return last_t_; }
    double last_theta() const noexcept { return last_theta_; }
    double last_phi() const noexcept { return last_phi_; }

private:
    double last_t_;
    double last_theta_;
    double last_phi_;
};

/// The requested window would need more output samples than the budget allows.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nothing to analyse (empty or identically zero emission record).
class analysis_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ladder step too large to keep populations non-negative.
class step_size_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration could not be parsed or validated. `where()` is a line or a field path.
class config_error : public std::runtime_error {
public:
    config_error(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace superradiance

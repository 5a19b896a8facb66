#ifndef GHOM_ERRORS_HPP
#define GHOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ghom {

// Exit-code contract: 0 success, 2 configuration error, 3 numerical failure,
// 4 assumption-check failure under --strict.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 2;
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 3;
};

struct AssumptionError : std::runtime_error {
    explicit AssumptionError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr int exit_code = 4;
};

}  // namespace ghom

#endif

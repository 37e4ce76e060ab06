#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace polya {

/// A request that would exceed a configured resource limit (memory budget,
/// enumeration size). Carries the largest parameter value that would fit.
class resource_error : public std::runtime_error {
public:
    resource_error(const std::string& what, std::optional<std::int64_t> largest_feasible)
        : std::runtime_error(what), largest_feasible_(largest_feasible)
    {
    }

    [[nodiscard]] std::optional<std::int64_t> largest_feasible() const noexcept
    {
        return largest_feasible_;
    }

private:
    std::optional<std::int64_t> largest_feasible_;
};

} // namespace polya

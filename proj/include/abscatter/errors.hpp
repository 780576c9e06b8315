#pragma once

#include <stdexcept>
#include <string>

namespace abscatter {

/// Argument outside the mathematical domain of an operation (x <= 0, NaN, ...).
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// An evaluation path was asked to work where it cannot deliver its accuracy.
class PrecisionError : public std::runtime_error {
  public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Automatic channel truncation hit its hard cap before meeting the tolerance.
class TruncationError : public std::runtime_error {
  public:
    explicit TruncationError(const std::string& what, int m_reached)
        : std::runtime_error(what), m_reached_(m_reached) {}

    int m_reached() const noexcept { return m_reached_; }

  private:
    int m_reached_;
};

}  // namespace abscatter

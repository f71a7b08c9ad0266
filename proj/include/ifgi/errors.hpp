#pragma once

#include <stdexcept>
#include <string>

namespace ifgi {

/// Invalid or inconsistent user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Filesystem / file-format failure (CLI exit code 3).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical contract was violated (probability out of band, overflow).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace ifgi

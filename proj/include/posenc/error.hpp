#pragma once

#include <stdexcept>
#include <string>

namespace posenc {

// Each category maps onto a CLI exit code: config 1, data 2, numeric 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace posenc

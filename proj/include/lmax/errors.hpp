#pragma once

#include <stdexcept>
#include <string>

namespace lmax {

struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& m) : std::runtime_error(m) {}
};

struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& m) : std::runtime_error(m) {}
};

struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& m) : std::runtime_error(m) {}
};

struct singular_weight_error : std::runtime_error {
  explicit singular_weight_error(const std::string& m) : std::runtime_error(m) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace lmax

#pragma once

#include <stdexcept>
#include <string>

namespace dsea {

enum class Errc {
  invalid_argument = 2,
  domain = 5,
  seam = 6,
  quadrature = 7,
  no_convergence = 3,
  verification = 4,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace dsea

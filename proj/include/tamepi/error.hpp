#ifndef TAMEPI_ERROR_HPP_
#define TAMEPI_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tamepi {

  // Raised for every domain failure: bad input data, violated
  // preconditions, or a self-check that caught an inconsistency.
  class Error : public std::runtime_error {
   public:
    explicit Error(std::string const& what) : std::runtime_error(what) {}
  };

}  // namespace tamepi

#endif  // TAMEPI_ERROR_HPP_

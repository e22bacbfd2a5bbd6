#include "errors.hpp"

namespace alfven {

BlowUpError::BlowUpError(double t_star, const std::string& what)
    : Error(ErrorKind::blow_up, what + " (t* = " + std::to_string(t_star) + ")"), t_star_(t_star) {}

}  // namespace alfven

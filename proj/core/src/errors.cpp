#include "cliffop/errors.hpp"

#include <sstream>

namespace cliffop {

SignatureMismatch::SignatureMismatch(int lhs, int rhs)
    : Error("signature mismatch: n = " + std::to_string(lhs) + " vs n = " + std::to_string(rhs)) {}

ParseError::ParseError(std::string message, std::size_t offset)
    : Error(message + " at offset " + std::to_string(offset)), offset_(offset), detail_(std::move(message)) {}

DomainError::DomainError(std::string message, std::string subexpression)
    : Error(message + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)),
      detail_(std::move(message)) {}

namespace {
std::string blow_up_message(int axis, double location, double value) {
  std::ostringstream os;
  os.precision(17);
  os << "scalar Riccati solution on axis " << axis << " blows up near x = " << location << " (|f| = " << value << ")";
  return os.str();
}
}  // namespace

BlowUpError::BlowUpError(int axis, double location, double value)
    : Error(blow_up_message(axis, location, value)), axis_(axis), location_(location) {}

}  // namespace cliffop

#pragma once

#include <stdexcept>
#include <string>

namespace orbitfield {

// Bad shapes, unknown names, unparsable files.
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold for this input.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank/convergence decisions that cannot be made reliably.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace orbitfield

namespace orbitfield {

// Runs body(); library errors are rethrown with `context` prefixed, keeping their type.
template <class Body>
decltype(auto) with_context(const std::string& context, Body&& body) {
  try {
    return body();
  } catch (const MalformedInput& e) {
    throw MalformedInput(context + ": " + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(context + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  } catch (const InternalError& e) {
    throw InternalError(context + ": " + e.what());
  }
}

}  // namespace orbitfield

#ifndef NEARQUAD_ERRORS_HPP
#define NEARQUAD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nearquad {

// All library failures derive from nearquad::error so callers can catch the
// family in one place; the concrete type says which contract was broken.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field point lies (numerically) on the element line, y == 0.  Principal-value
// and finite-part integrals are not handled.
class singular_configuration : public error {
 public:
  using error::error;
};

// Moment order beyond the range where the monomial expansion stays accurate.
class overflow_risk : public error {
 public:
  using error::error;
};

// Caller passed arguments that violate a documented precondition.
class contract_violation : public error {
 public:
  using error::error;
};

class iteration_failure : public error {
 public:
  using error::error;
};

// Integrand returned a non-finite value at a node.
class evaluation_error : public error {
 public:
  evaluation_error(const std::string& what, std::size_t node_index, double node)
      : error(what), node_index_(node_index), node_(node) {}

  std::size_t node_index() const noexcept { return node_index_; }
  double node() const noexcept { return node_; }

 private:
  std::size_t node_index_;
  double node_;
};

// Reference integral vanished, so no relative error can be formed.
class excluded_abscissa : public error {
 public:
  using error::error;
};

}  // namespace nearquad

#endif  // NEARQUAD_ERRORS_HPP

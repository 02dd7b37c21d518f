#pragma once

#include <stdexcept>
#include <string>

namespace ymlab {

// Every failure raised by the library derives from ymlab::error so callers
// (the CLI in particular) can separate domain failures from bugs.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct dimension_error : error {
  using error::error;
};

// Bad parameters: out-of-range inputs, inadmissible configurations.
struct parameter_error : error {
  using error::error;
};

struct divergent_integral_error : error {
  divergent_integral_error(const std::string& term, const std::string& what)
      : error(what), term_name(term) {}
  std::string term_name;
};

// Sector cutoff certificate could not be established.
struct truncation_error : error {
  using error::error;
};

// Heat-trace tail could not be certified below the requested fraction.
struct resolution_error : error {
  using error::error;
};

struct precondition_error : error {
  using error::error;
};

// A geometry record violates one of its defining identities.
struct inconsistent_record_error : error {
  inconsistent_record_error(const std::string& identity, const std::string& what)
      : error(what), identity_name(identity) {}
  std::string identity_name;
};

}  // namespace ymlab

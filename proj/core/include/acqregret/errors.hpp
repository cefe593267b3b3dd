#pragma once

#include <stdexcept>
#include <string>

namespace acqregret {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidKernelError : public Error {
 public:
  using Error::Error;
};

// Cholesky of the training covariance failed even at maximum jitter.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

}  // namespace acqregret

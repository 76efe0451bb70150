#pragma once

#include <stdexcept>
#include <string>

namespace dynamask {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// File exists but its contents could not be decoded as an image.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// A raster is smaller than an operation allows.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Two rasters that must share dimensions do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Frames from different clips were combined.
class ClipMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySet : public Error {
 public:
  using Error::Error;
};

// A sample count is out of range for the frame set.
class CountError : public Error {
 public:
  using Error::Error;
};

// A frame index does not refer to a valid (or sampled) frame.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Invalid synthetic scene description.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynamask

#pragma once

#include <stdexcept>
#include <string>

namespace paes {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, const std::string& path)
      : Error(what + ": " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Malformed PKCS#7 trailer on unpad (wrong key or corrupted ciphertext).
class PaddingError : public Error {
 public:
  using Error::Error;
};

// One or more chunk workers failed; message names the chunk indices.
class WorkerError : public Error {
 public:
  using Error::Error;
};

}  // namespace paes

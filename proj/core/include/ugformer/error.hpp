/* Copyright 2026 The ugformer Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef UGFORMER_ERROR_HPP_
#define UGFORMER_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ugformer {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mandatory dataset file could not be opened.
class LoadError : public Error {
 public:
  using Error::Error;
};

// A dataset or checkpoint file is syntactically or structurally malformed.
class FormatError : public Error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& what);
  explicit FormatError(const std::string& what) : Error(what) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Invalid combination of user-supplied settings.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite input where a finite value is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Caller broke an operation precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Dense attention requested on a graph above the configured node cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Checkpoint and model configuration disagree, or the file version is unknown.
class VersionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Loss became non-finite during training.
class TrainingError : public Error {
 public:
  TrainingError(std::size_t epoch, const std::string& what);

  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace ugformer

#endif  // UGFORMER_ERROR_HPP_

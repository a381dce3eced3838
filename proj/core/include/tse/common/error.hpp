// Copyright 2026 The tsebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace tse {

// Every failure raised by the library derives from Error. The CLI maps
// validation-type failures (is_validation() == true) to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool is_validation() const noexcept { return false; }
};

#define TSE_DEFINE_ERROR(Name, Validation)                         \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    bool is_validation() const noexcept override { return Validation; } \
  };

TSE_DEFINE_ERROR(FormatError, true)
TSE_DEFINE_ERROR(CorruptFileError, false)
TSE_DEFINE_ERROR(IoError, false)
TSE_DEFINE_ERROR(RangeError, true)
TSE_DEFINE_ERROR(DegenerateInputError, true)
TSE_DEFINE_ERROR(LengthError, true)
TSE_DEFINE_ERROR(ShapeError, true)
TSE_DEFINE_ERROR(EmptyInputError, true)
TSE_DEFINE_ERROR(NormalizationError, true)
TSE_DEFINE_ERROR(ConfigError, true)
TSE_DEFINE_ERROR(ValidationError, true)
TSE_DEFINE_ERROR(TrainingError, false)

#undef TSE_DEFINE_ERROR

}  // namespace tse

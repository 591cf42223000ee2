// Copyright 2026 The kossprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace kossprobe {

// Bad caller input: invalid index, malformed file, violated precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A linear solve was refused because the probe matrix is singular or too
// ill-conditioned to trust.
class NumericalRefusal : public std::runtime_error {
 public:
  NumericalRefusal(const std::string& what, double determinant, double condition_number)
      : std::runtime_error(what), determinant_(determinant), condition_number_(condition_number) {}

  double determinant() const noexcept { return determinant_; }
  double condition_number() const noexcept { return condition_number_; }

 private:
  double determinant_;
  double condition_number_;
};

// The Kossakowski matrix has a negative eigenvalue, so no Kraus form exists.
class NotCompletelyPositive : public std::domain_error {
 public:
  NotCompletelyPositive(const std::string& what, double eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace kossprobe

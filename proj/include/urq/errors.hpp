// SPDX-License-Identifier: Apache-2.0
//
// urq: universal rate-efficient scalar quantization
// Copyright (C) 2026 The urq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace urq
{

// Invalid dimension, count or parameter combination (a violated precondition).
class ParameterError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (negative distance,
// probability outside (0,1), non-finite input, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// The requested bound exists but carries no information (decay base c_r >= 1).
class VacuousBoundError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace urq

/*
 * Copyright 2026 The photonwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHOTONWALK_ERROR_HPP
#define PHOTONWALK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace photonwalk {

/// Bad parameter value (non-positive length, dimension mismatch, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Index or propagation distance outside the valid domain.
class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Input that is well formed but outside what the model covers
/// (e.g. both photons launched into the same guide).
class UnsupportedInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UndefinedVisibility : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedRatio : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ReconstructionFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace photonwalk

#endif

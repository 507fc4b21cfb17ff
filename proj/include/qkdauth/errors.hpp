// Copyright 2026 The qkdauth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QKDAUTH_ERRORS_HPP
#define QKDAUTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qkdauth {

/// Base class of all qkdauth exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A length or dimension precondition was violated.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The key pool does not hold enough unconsumed bits. Callers must abort the
/// authentication attempt; one-time material is never wrapped or stretched.
class PoolExhaustedError : public Error {
public:
    using Error::Error;
};

/// Verifier and tagger pool replicas disagree on the consume cursor.
/// Distinct from an authentication reject: this is a protocol abort.
class PoolDesyncError : public Error {
public:
    using Error::Error;
};

/// An exhaustive check was requested above its enumeration budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Malformed input: bad hex, bad bit literal, or a corrupt pool file.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace qkdauth

#endif // QKDAUTH_ERRORS_HPP

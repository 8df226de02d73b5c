// Copyright 2026 The TacticScan Authors
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

namespace tacticscan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tactic has fewer accepted related snippets than the smallest sample bin.
class TacticTooSmall : public Error {
public:
    using Error::Error;
};

/// The unrelated pool cannot cover the requested sample bin.
class InsufficientUnrelated : public Error {
public:
    using Error::Error;
};

/// Malformed input file; the message names the offending line or key.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A file-backed embedding backend was asked for a window it does not hold.
class MissingEmbedding : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Failure talking to the question search API.
class FetchError : public Error {
public:
    FetchError(const std::string& what, bool retryable, int status = 0)
        : Error(what), retryable_(retryable), status_(status) {}

    bool retryable() const noexcept { return retryable_; }
    int status() const noexcept { return status_; }

private:
    bool retryable_;
    int status_;
};

}  // namespace tacticscan

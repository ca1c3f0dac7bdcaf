/*
 * Copyright 2026 The mot1d Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace mot {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The pair (mu, nu) is not in convex order, so no martingale coupling exists.
class NotInConvexOrder : public Error
{
public:
    using Error::Error;
};

/// Endpoint masses of a component could not be split consistently.
class InconsistentSplit : public Error
{
public:
    using Error::Error;
};

class InvalidMeasure : public Error
{
public:
    using Error::Error;
};

class Infeasible : public Error
{
public:
    using Error::Error;
};

class Unbounded : public Error
{
public:
    using Error::Error;
};

class SlacknessViolated : public Error
{
public:
    using Error::Error;
};

class NotCompact : public Error
{
public:
    using Error::Error;
};

class BadParameters : public Error
{
public:
    using Error::Error;
};

class RootFindFailed : public Error
{
public:
    RootFindFailed(std::string const& what, double x)
        : Error(what)
        , x(x)
    {}

    double x;
};

class CostDomainError : public Error
{
public:
    using Error::Error;
};

} // namespace mot

// SPDX-License-Identifier: Apache-2.0
//
// mirrorroom: mirror-source radio channel toolkit for rectangular rooms
// Copyright (C) 2026 The mirrorroom authors
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

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace mirrorroom
{
    using Vec3 = Eigen::Vector3d;

    inline constexpr double default_speed_of_light = 3.0e8;

    // Error hierarchy. Every failure raised by the library derives from Error so
    // callers can catch one type; the subclasses name the failure category.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Coincident points where a direction is required.
    class GeometryError : public Error
    {
    public:
        using Error::Error;
    };

    // Enumeration would exceed the configured index budget.
    class ResourceLimitError : public Error
    {
    public:
        using Error::Error;
    };

    // Query beyond the delay horizon a path list was enumerated for.
    class HorizonError : public Error
    {
    public:
        using Error::Error;
    };

    // Moments of a zero-energy trace.
    class MomentsError : public Error
    {
    public:
        using Error::Error;
    };

    // Invalid or incomplete configuration.
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    // Argument outside the domain of a closed-form expression.
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    class EmptySampleError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };

} // namespace mirrorroom

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

#include "mirrorroom/common.hpp"
#include "mirrorroom/geometry.hpp"
#include "mirrorroom/random.hpp"

#include <functional>
#include <memory>

namespace mirrorroom
{
    // Lossless directional power-gain pattern (gain per solid angle, integrating
    // to 4*pi over the sphere). Patterns are immutable; reorienting returns a copy.
    class AntennaPattern
    {
    public:
        enum class Kind
        {
            isotropic,
            cap,
            custom
        };

        // Gain for a direction expressed in the antenna frame, i.e. with the
        // boresight mapped to +z.
        using GainFunction = std::function<double(const Vec3 &local_direction)>;

        static AntennaPattern isotropic();

        // Constant gain 1/omega on the spherical cap {u : u.zeta >= 1 - 2 omega}.
        static AntennaPattern cap(double beam_fraction, const Vec3 &orientation = Vec3::UnitZ());

        // Arbitrary non-negative pattern with a declared beam coverage fraction.
        // The caller is responsible for the normalization.
        static AntennaPattern custom(GainFunction gain, double beam_fraction, const Vec3 &orientation = Vec3::UnitZ());

        Kind kind() const { return kind_; }
        const Vec3 &orientation() const { return orientation_; }
        double beam_fraction() const { return omega_; }

        AntennaPattern with_orientation(const Vec3 &orientation) const;

        double gain(const Vec3 &direction) const;
        bool in_support(const Vec3 &direction) const { return gain(direction) > 0.0; }

        // Half beam width arccos(1 - 2 omega); pi for isotropic patterns.
        double half_beam_width() const;

    private:
        AntennaPattern(Kind kind, double omega, const Vec3 &orientation, std::shared_ptr<const GainFunction> fn);

        Kind kind_;
        double omega_;
        Vec3 orientation_;
        std::shared_ptr<const GainFunction> custom_;
    };

    double gain(const AntennaPattern &p, const Vec3 &direction);
    double beam_fraction(const AntennaPattern &p);
    bool in_support(const AntennaPattern &p, const Vec3 &direction);

    // Uniform direction on the unit sphere.
    Vec3 sample_orientation(Rng &rng);

    // Independent uniform coordinates on [0, L_axis).
    Vec3 sample_position(Rng &rng, const Room &room);

} // namespace mirrorroom

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

#include "mirrorroom/antenna.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <algorithm>
#include <random>

namespace mirrorroom
{
    namespace
    {
        Vec3 normalized_orientation(const Vec3 &v)
        {
            const double n = v.norm();
            if (!(n > 0.0) || !std::isfinite(n))
                throw ConfigError("antenna: orientation must be a non-zero finite vector");
            return v / n;
        }

        void check_fraction(double omega)
        {
            if (!(omega > 0.0 && omega <= 1.0))
                throw ConfigError("antenna: beam fraction must lie in (0,1]");
        }
    } // namespace

    AntennaPattern::AntennaPattern(Kind kind, double omega, const Vec3 &orientation,
                                   std::shared_ptr<const GainFunction> fn)
        : kind_(kind), omega_(omega), orientation_(orientation), custom_(std::move(fn))
    {
    }

    AntennaPattern AntennaPattern::isotropic()
    {
        return AntennaPattern(Kind::isotropic, 1.0, Vec3::UnitZ(), nullptr);
    }

    AntennaPattern AntennaPattern::cap(double beam_fraction, const Vec3 &orientation)
    {
        check_fraction(beam_fraction);
        return AntennaPattern(Kind::cap, beam_fraction, normalized_orientation(orientation), nullptr);
    }

    AntennaPattern AntennaPattern::custom(GainFunction gain, double beam_fraction, const Vec3 &orientation)
    {
        check_fraction(beam_fraction);
        if (!gain)
            throw ConfigError("antenna: custom pattern needs a gain function");
        return AntennaPattern(Kind::custom, beam_fraction, normalized_orientation(orientation),
                              std::make_shared<const GainFunction>(std::move(gain)));
    }

    AntennaPattern AntennaPattern::with_orientation(const Vec3 &orientation) const
    {
        AntennaPattern p = *this;
        p.orientation_ = normalized_orientation(orientation);
        return p;
    }

    double AntennaPattern::gain(const Vec3 &direction) const
    {
        switch (kind_)
        {
        case Kind::isotropic:
            return 1.0;
        case Kind::cap:
            return direction.dot(orientation_) >= 1.0 - 2.0 * omega_ ? 1.0 / omega_ : 0.0;
        case Kind::custom:
        {
            const Eigen::Quaterniond to_local = Eigen::Quaterniond::FromTwoVectors(orientation_, Vec3::UnitZ());
            return std::max(0.0, (*custom_)(to_local * direction));
        }
        }
        return 0.0;
    }

    double AntennaPattern::half_beam_width() const
    {
        return std::acos(1.0 - 2.0 * omega_);
    }

    double gain(const AntennaPattern &p, const Vec3 &direction) { return p.gain(direction); }
    double beam_fraction(const AntennaPattern &p) { return p.beam_fraction(); }
    bool in_support(const AntennaPattern &p, const Vec3 &direction) { return p.in_support(direction); }

    Vec3 sample_orientation(Rng &rng)
    {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (;;)
        {
            const Vec3 v(normal(rng), normal(rng), normal(rng));
            const double n = v.norm();
            if (n > 1e-12)
                return v / n;
        }
    }

    Vec3 sample_position(Rng &rng, const Room &room)
    {
        Vec3 p;
        for (int a = 0; a < 3; ++a)
        {
            p[a] = uniform01(rng) * room.length(a);
            if (p[a] >= room.length(a))
                p[a] = std::nextafter(room.length(a), 0.0);
        }
        return p;
    }

} // namespace mirrorroom

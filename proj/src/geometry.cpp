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

#include "mirrorroom/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace mirrorroom
{
    Room::Room(const Vec3 &lengths, const std::array<double, 6> &wall_gains)
        : lengths_(lengths), gains_(wall_gains)
    {
        for (int a = 0; a < 3; ++a)
            if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a]))
                throw ConfigError("room: dimension " + std::to_string(a) + " must be positive and finite");
        for (double g : gains_)
            if (!(g >= 0.0 && g <= 1.0))
                throw ConfigError("room: wall gains must lie in [0,1]");
    }

    Room::Room(const Vec3 &lengths, double wall_gain)
        : Room(lengths, {wall_gain, wall_gain, wall_gain, wall_gain, wall_gain, wall_gain})
    {
    }

    bool Room::uniform_gain() const
    {
        for (double g : gains_)
            if (g != gains_[0])
                return false;
        return true;
    }

    double Room::volume() const { return lengths_.prod(); }

    double Room::surface() const
    {
        const double x = lengths_[0], y = lengths_[1], z = lengths_[2];
        return 2.0 * (x * y + x * z + y * z);
    }

    double Room::diagonal() const { return lengths_.norm(); }

    bool Room::contains(const Vec3 &p) const
    {
        for (int a = 0; a < 3; ++a)
            if (!(p[a] >= 0.0 && p[a] < lengths_[a]))
                return false;
        return true;
    }

    int MirrorIndex::order() const { return std::abs(kx) + std::abs(ky) + std::abs(kz); }

    Vec3 mirror_source_position(const Room &room, const Vec3 &source, MirrorIndex k)
    {
        Vec3 out;
        for (int a = 0; a < 3; ++a)
        {
            const int ka = k[a];
            const double sign = (ka % 2 == 0) ? 1.0 : -1.0;
            out[a] = ceil_half(ka) * 2.0 * room.length(a) + sign * source[a];
        }
        return out;
    }

    double path_delay(const Vec3 &mirror_position, const Vec3 &receiver, double speed_of_light)
    {
        return (mirror_position - receiver).norm() / speed_of_light;
    }

    Vec3 arrival_direction(const Vec3 &mirror_position, const Vec3 &receiver)
    {
        const Vec3 d = mirror_position - receiver;
        const double n = d.norm();
        if (!(n > 0.0))
            throw GeometryError("arrival_direction: source and receiver coincide");
        return d / n;
    }

    Vec3 departure_from_arrival(MirrorIndex k, const Vec3 &doa)
    {
        auto parity = [](int n) { return (n % 2 == 0) ? 1.0 : -1.0; };
        // Each wall hit flips one component of the propagation direction.
        return Vec3(-parity(k.kx) * doa[0], -parity(k.ky) * doa[1], -parity(k.kz) * doa[2]);
    }

    std::array<int, 6> wall_interaction_counts(MirrorIndex k)
    {
        std::array<int, 6> n{};
        for (int a = 0; a < 3; ++a)
        {
            n[2 * a] = std::abs(floor_half(k[a]));
            n[2 * a + 1] = std::abs(ceil_half(k[a]));
        }
        return n;
    }

    double reflection_gain(const Room &room, MirrorIndex k)
    {
        const auto counts = wall_interaction_counts(k);
        double g = 1.0;
        for (int w = 0; w < 6; ++w)
            if (counts[w] > 0)
                g *= std::pow(room.wall_gain(w), counts[w]);
        return g;
    }

    int axis_index_bound(double reach, double length)
    {
        // Image k lies at least (|k|-1)*L away from any point inside the room.
        return static_cast<int>(std::ceil(reach / length)) + 1;
    }

    std::vector<MirrorSource> enumerate_indices(const Room &room, const Vec3 &source, const Vec3 &receiver,
                                                double tau_max, double speed_of_light, std::size_t index_budget)
    {
        if (!(tau_max >= 0.0) || !std::isfinite(tau_max))
            throw ConfigError("enumerate_indices: tau_max must be finite and non-negative");
        if (!(speed_of_light > 0.0))
            throw ConfigError("enumerate_indices: speed of light must be positive");

        const double reach = speed_of_light * tau_max;
        std::array<int, 3> bound{};
        double cube = 1.0;
        for (int a = 0; a < 3; ++a)
        {
            bound[a] = axis_index_bound(reach, room.length(a));
            cube *= 2.0 * bound[a] + 1.0;
        }
        if (cube > static_cast<double>(index_budget))
            throw ResourceLimitError("enumerate_indices: " + std::to_string(cube) +
                                     " candidate indices exceed budget of " + std::to_string(index_budget));

        // Squared per-axis offsets are separable, so prune whole rows early.
        // Slack keeps the pruning a strict superset of the final delay test.
        const double reach2 = reach * reach * (1.0 + 1e-9);
        std::vector<MirrorSource> out;
        MirrorIndex k;
        for (k.kx = -bound[0]; k.kx <= bound[0]; ++k.kx)
        {
            const double dx = ceil_half(k.kx) * 2.0 * room.length(0) + (k.kx % 2 == 0 ? 1.0 : -1.0) * source[0] - receiver[0];
            if (dx * dx > reach2)
                continue;
            for (k.ky = -bound[1]; k.ky <= bound[1]; ++k.ky)
            {
                const double dy = ceil_half(k.ky) * 2.0 * room.length(1) + (k.ky % 2 == 0 ? 1.0 : -1.0) * source[1] - receiver[1];
                if (dx * dx + dy * dy > reach2)
                    continue;
                for (k.kz = -bound[2]; k.kz <= bound[2]; ++k.kz)
                {
                    const Vec3 pos = mirror_source_position(room, source, k);
                    const double tau = path_delay(pos, receiver, speed_of_light);
                    if (tau <= tau_max)
                        out.push_back({k, pos, tau});
                }
            }
        }
        return out;
    }

} // namespace mirrorroom

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

#include <array>
#include <compare>
#include <cstddef>
#include <vector>

namespace mirrorroom
{
    // Rectangular room spanning [0,Lx) x [0,Ly) x [0,Lz).
    // Wall gains are power reflectances ordered W1..W6: W1/W2 are the walls
    // perpendicular to x at x=0 and x=Lx, W3/W4 for y, W5/W6 for z.
    class Room
    {
    public:
        Room(const Vec3 &lengths, const std::array<double, 6> &wall_gains);
        Room(const Vec3 &lengths, double wall_gain);

        const Vec3 &lengths() const { return lengths_; }
        double length(int axis) const { return lengths_[axis]; }
        const std::array<double, 6> &wall_gains() const { return gains_; }
        double wall_gain(int wall) const { return gains_.at(static_cast<std::size_t>(wall)); }

        // True when all six walls share one reflectance.
        bool uniform_gain() const;

        double volume() const;
        double surface() const;
        double diagonal() const;

        // Half-open containment test, matching the room's coordinate span.
        bool contains(const Vec3 &p) const;

    private:
        Vec3 lengths_;
        std::array<double, 6> gains_;
    };

    // Signed reflection counts per axis; (0,0,0) is the direct path.
    struct MirrorIndex
    {
        int kx = 0;
        int ky = 0;
        int kz = 0;

        int operator[](int axis) const { return axis == 0 ? kx : (axis == 1 ? ky : kz); }
        int order() const;
        bool is_direct() const { return kx == 0 && ky == 0 && kz == 0; }

        auto operator<=>(const MirrorIndex &) const = default;
    };

    // Integer floor/ceil of k/2 for signed k.
    constexpr int floor_half(int k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }
    constexpr int ceil_half(int k) { return k >= 0 ? (k + 1) / 2 : -((-k) / 2); }

    Vec3 mirror_source_position(const Room &room, const Vec3 &source, MirrorIndex k);

    double path_delay(const Vec3 &mirror_position, const Vec3 &receiver, double speed_of_light);

    // Unit vector from the receiver towards the (mirror) source.
    // Throws GeometryError for coincident points.
    Vec3 arrival_direction(const Vec3 &mirror_position, const Vec3 &receiver);

    // Direction of departure of path k from its direction of arrival:
    // -diag((-1)^kx, (-1)^ky, (-1)^kz) * doa.
    Vec3 departure_from_arrival(MirrorIndex k, const Vec3 &doa);

    // Interaction counts with walls W1..W6.
    std::array<int, 6> wall_interaction_counts(MirrorIndex k);

    // Product of wall gains raised to the interaction counts.
    double reflection_gain(const Room &room, MirrorIndex k);

    struct MirrorSource
    {
        MirrorIndex index;
        Vec3 position;
        double delay = 0.0;
    };

    // Per-axis index bound that contains every image within distance `reach`.
    int axis_index_bound(double reach, double length);

    inline constexpr std::size_t default_index_budget = 50'000'000;

    // All mirror sources with delay <= tau_max, lexicographic in k.
    // Throws ResourceLimitError when the candidate index cube is larger than
    // `index_budget`.
    std::vector<MirrorSource> enumerate_indices(const Room &room, const Vec3 &source, const Vec3 &receiver,
                                                double tau_max, double speed_of_light,
                                                std::size_t index_budget = default_index_budget);

} // namespace mirrorroom

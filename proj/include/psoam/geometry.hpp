// SPDX-License-Identifier: Apache-2.0
//
// psoamsim - plane spiral OAM mode-group MIMO link simulator
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

#include <cmath>
#include <stdexcept>
#include <vector>

namespace psoam {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Point in the horizontal plane. Boresight (the propagation axis) is +x;
/// array elements are offset along the transverse y axis.
struct Point2
{
    double x = 0.0; // meters
    double y = 0.0; // meters
};

enum class TxLayout
{
    Coaxial, // every transmit element at the origin
    Ula      // uniform linear array transverse to boresight
};

enum class Side
{
    Tx,
    Rx
};

/// Planar placement of a point-to-point link: transmit array at x=0,
/// receive ULA at x=distance. All experiments are line-of-sight in the
/// theta = 90 deg plane; elevation is not modeled.
struct LinkGeometry
{
    TxLayout tx_layout = TxLayout::Coaxial;
    double tx_aperture_m = 0.0; // ULA span, ignored for Coaxial
    double rx_aperture_m = 0.0;
    double distance_m = 0.0; // boresight separation of array centroids
    int n_tx = 1;
    int n_rx = 1;
    double wavelength_m = 0.0;

    void validate() const
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("geometry: distance must be > 0");
        if (!(wavelength_m > 0.0))
            throw std::invalid_argument("geometry: wavelength must be > 0");
        if (rx_aperture_m < 0.0)
            throw std::invalid_argument("geometry: rx aperture must be >= 0");
        if (tx_layout == TxLayout::Ula && tx_aperture_m < 0.0)
            throw std::invalid_argument("geometry: tx aperture must be >= 0");
        if (n_tx < 1 || n_rx < 1)
            throw std::invalid_argument("geometry: element counts must be >= 1");
    }

    static LinkGeometry coaxial(int n_tx, int n_rx, double rx_aperture_m, double distance_m,
                                double wavelength_m)
    {
        LinkGeometry g;
        g.tx_layout = TxLayout::Coaxial;
        g.n_tx = n_tx;
        g.n_rx = n_rx;
        g.rx_aperture_m = rx_aperture_m;
        g.distance_m = distance_m;
        g.wavelength_m = wavelength_m;
        g.validate();
        return g;
    }

    static LinkGeometry ula(int n_tx, int n_rx, double tx_aperture_m, double rx_aperture_m,
                            double distance_m, double wavelength_m)
    {
        LinkGeometry g;
        g.tx_layout = TxLayout::Ula;
        g.n_tx = n_tx;
        g.n_rx = n_rx;
        g.tx_aperture_m = tx_aperture_m;
        g.rx_aperture_m = rx_aperture_m;
        g.distance_m = distance_m;
        g.wavelength_m = wavelength_m;
        g.validate();
        return g;
    }
};

namespace detail {
// Uniformly spaced, centered on the given x axis position, most-negative
// transverse coordinate first. A singleton sits at the centroid.
inline std::vector<Point2> ula_points(int n, double aperture, double x)
{
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    if (n == 1)
    {
        pts.push_back({x, 0.0});
        return pts;
    }
    const double spacing = aperture / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i)
        pts.push_back({x, -0.5 * aperture + spacing * static_cast<double>(i)});
    return pts;
}
} // namespace detail

/// Element positions for one side of the link, in deterministic order.
inline std::vector<Point2> element_positions(const LinkGeometry &geom, Side side)
{
    geom.validate();
    if (side == Side::Tx)
    {
        if (geom.tx_layout == TxLayout::Coaxial)
            return std::vector<Point2>(static_cast<std::size_t>(geom.n_tx), Point2{0.0, 0.0});
        return detail::ula_points(geom.n_tx, geom.tx_aperture_m, 0.0);
    }
    return detail::ula_points(geom.n_rx, geom.rx_aperture_m, geom.distance_m);
}

/// Exact Euclidean propagation distance d_mn; no far-field approximation.
inline double path_distance(Point2 p, Point2 q) { return std::hypot(q.x - p.x, q.y - p.y); }

/// Azimuth of the receiver as seen from a transmit element, measured from
/// boresight (+x), in (-pi, pi]. Throws for coincident points.
inline double azimuth_from_tx(Point2 tx, Point2 rx)
{
    const double dx = rx.x - tx.x;
    const double dy = rx.y - tx.y;
    if (dx == 0.0 && dy == 0.0)
        throw std::invalid_argument("undefined azimuth: coincident points");
    const double phi = std::atan2(dy, dx);
    return phi == -kPi ? kPi : phi;
}

/// Near/far-field boundary 2*aperture^2 / lambda.
inline double rayleigh_distance(double aperture_m, double wavelength_m)
{
    if (aperture_m < 0.0)
        throw std::invalid_argument("rayleigh_distance: aperture must be >= 0");
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("rayleigh_distance: wavelength must be > 0");
    return 2.0 * aperture_m * aperture_m / wavelength_m;
}

} // namespace psoam

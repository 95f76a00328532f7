// SPDX-License-Identifier: Apache-2.0
//
// ddpchan - parameter estimation for double-directional dual-polarized MIMO channels
// Copyright (C) 2026 the ddpchan developers
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

#include <ddpchan/manifolds.hpp>

#include <ddpchan/errors.hpp>

#include <cmath>
#include <string>

namespace ddpchan
{

namespace
{

constexpr double k_domain_tol = 1e-9;

// asin argument with tolerance: values within k_domain_tol of [-1, 1] are
// clamped, anything further out cannot come from a physical angle.
double checked_asin(double arg, const char* what)
{
    if (std::abs(arg) > 1.0 + k_domain_tol)
        throw inconsistent_phase_error(std::string(what) + ": sine magnitude " +
                                       std::to_string(std::abs(arg)) + " exceeds 1");
    return std::asin(std::clamp(arg, -1.0, 1.0));
}

} // namespace

PhaseTriple phases_from_angles(const PathAngles& angles, const ArrayGeometry& geom)
{
    const double c = 2.0 * M_PI / geom.wavelength;
    PhaseTriple p;
    p.omega_r = c * geom.dr * std::sin(angles.theta);
    p.omega_x = c * geom.dx * std::sin(angles.phi) * std::cos(angles.vartheta);
    p.omega_y = c * geom.dy * std::sin(angles.phi) * std::sin(angles.vartheta);
    return p;
}

PathAngles angles_from_phases(const PhaseTriple& phases, const ArrayGeometry& geom)
{
    const double c = geom.wavelength / (2.0 * M_PI);
    const double sr = c * phases.omega_r / geom.dr;
    const double gx = c * phases.omega_x / geom.dx;
    const double gy = c * phases.omega_y / geom.dy;
    PathAngles a;
    a.theta = checked_asin(sr, "angles_from_phases: theta");
    a.phi = checked_asin(std::hypot(gx, gy), "angles_from_phases: phi");
    a.vartheta = (gx == 0.0 && gy == 0.0) ? 0.0 : std::atan2(gy, gx);
    return a;
}

bool project_phases(PhaseTriple& phases, const ArrayGeometry& geom)
{
    const double c = geom.wavelength / (2.0 * M_PI);
    const double sr = c * phases.omega_r / geom.dr;
    double gx = c * phases.omega_x / geom.dx;
    double gy = c * phases.omega_y / geom.dy;
    bool violated = false;
    if (std::abs(sr) > 1.0)
    {
        violated = violated || std::abs(sr) > 1.0 + k_domain_tol;
        phases.omega_r = std::copysign(geom.dr / c, sr);
    }
    bool tx_dirty = false;
    if (gx < 0.0)
    {
        violated = violated || gx < -k_domain_tol;
        gx = 0.0;
        tx_dirty = true;
    }
    const double radius = std::hypot(gx, gy);
    if (radius > 1.0)
    {
        violated = violated || radius > 1.0 + k_domain_tol;
        gx /= radius;
        gy /= radius;
        tx_dirty = true;
    }
    if (tx_dirty)
    {
        phases.omega_x = gx * geom.dx / c;
        phases.omega_y = gy * geom.dy / c;
    }
    return violated;
}

VecC steering_ula(double omega, int m)
{
    VecC v(m);
    for (int l = 0; l < m; ++l)
        v(l) = std::polar(1.0, omega * static_cast<double>(l));
    return v;
}

VecC steering_ura(double omega_x, double omega_y, int mx, int my)
{
    const VecC ax = steering_ula(omega_x, mx);
    const VecC ay = steering_ula(omega_y, my);
    VecC v(mx * my);
    for (int ly = 0; ly < my; ++ly)
        v.segment(ly * mx, mx) = ay(ly) * ax;
    return v;
}

MatC steering_matrix_rx(const PathParams& paths, const ArrayGeometry& geom)
{
    const int k = paths.num_paths();
    MatC a(geom.mr, k);
    for (int j = 0; j < k; ++j)
    {
        const PhaseTriple p =
            phases_from_angles({paths.theta(j), paths.vartheta(j), paths.phi(j)}, geom);
        a.col(j) = steering_ula(p.omega_r, geom.mr);
    }
    return a;
}

MatC steering_matrix_tx(const PathParams& paths, const ArrayGeometry& geom)
{
    const int k = paths.num_paths();
    MatC a(geom.mt(), k);
    for (int j = 0; j < k; ++j)
    {
        const PhaseTriple p =
            phases_from_angles({paths.theta(j), paths.vartheta(j), paths.phi(j)}, geom);
        a.col(j) = steering_ura(p.omega_x, p.omega_y, geom.mx, geom.my);
    }
    return a;
}

MatC steering_matrix_tx_x(const PathParams& paths, const ArrayGeometry& geom)
{
    const int k = paths.num_paths();
    MatC a(geom.mx, k);
    for (int j = 0; j < k; ++j)
    {
        const PhaseTriple p =
            phases_from_angles({paths.theta(j), paths.vartheta(j), paths.phi(j)}, geom);
        a.col(j) = steering_ula(p.omega_x, geom.mx);
    }
    return a;
}

MatC steering_matrix_tx_y(const PathParams& paths, const ArrayGeometry& geom)
{
    const int k = paths.num_paths();
    MatC a(geom.my, k);
    for (int j = 0; j < k; ++j)
    {
        const PhaseTriple p =
            phases_from_angles({paths.theta(j), paths.vartheta(j), paths.phi(j)}, geom);
        a.col(j) = steering_ula(p.omega_y, geom.my);
    }
    return a;
}

} // namespace ddpchan

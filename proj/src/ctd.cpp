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

#include <ddpchan/ctd.hpp>

#include <ddpchan/errors.hpp>
#include <ddpchan/linalg.hpp>
#include <ddpchan/manifolds.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ddpchan
{

namespace
{

// Half of the half-power beamwidth in element-phase units; the search grid
// must land inside the main beam around each true direction.
constexpr double k_grid_step_scale = 0.443;

void check_observation(const MatC& x, int mr)
{
    if (mr < 1)
        throw std::invalid_argument("compressed unfolding: mr must be >= 1");
    if (x.rows() != 2 * mr)
        throw std::invalid_argument("compressed unfolding: observation must have 2*mr rows");
    if (x.cols() < 2 || x.cols() % 2 != 0)
        throw std::invalid_argument("compressed unfolding: pilot length must be even");
}

// Minimize the trigonometric polynomial a(w)^H C a(w) over w in [lo, hi]
// by rooting its derivative-free polynomial form on the unit circle.
double root_music_1d(const MatC& c, int m, double lo, double hi)
{
    // f(w) = sum_d coeff_d e^{jdw}, coeff_d the d-th diagonal sum of C.
    const int deg = 2 * (m - 1);
    if (deg == 0)
        return std::clamp(0.0, lo, hi);
    VecC poly(deg + 1); // poly(i) multiplies z^i; i = d + m - 1
    for (int d = -(m - 1); d <= m - 1; ++d)
    {
        cd sum = 0.0;
        for (int i = 0; i < m; ++i)
        {
            const int l = i + d;
            if (l >= 0 && l < m)
                sum += c(i, l);
        }
        poly(d + m - 1) = sum;
    }
    // Companion-matrix rooting after normalizing the leading coefficient.
    int top = deg;
    while (top > 0 && std::abs(poly(top)) < 1e-300)
        --top;
    auto spectrum = [&](double w) {
        double f = 0.0;
        for (int d = -(m - 1); d <= m - 1; ++d)
            f += std::real(poly(d + m - 1) * std::polar(1.0, d * w));
        return f;
    };
    double best_w = lo;
    double best_f = spectrum(lo);
    const double f_hi = spectrum(hi);
    if (f_hi < best_f)
    {
        best_f = f_hi;
        best_w = hi;
    }
    if (top >= 1)
    {
        MatC comp = MatC::Zero(top, top);
        for (int i = 1; i < top; ++i)
            comp(i, i - 1) = 1.0;
        for (int i = 0; i < top; ++i)
            comp(i, top - 1) = -poly(i) / poly(top);
        Eigen::ComplexEigenSolver<MatC> es(comp, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        {
            const cd z = es.eigenvalues()(i);
            if (std::abs(z) < 1e-12)
                continue;
            const double w = std::clamp(std::arg(z), lo, hi);
            const double f = spectrum(w);
            if (f < best_f)
            {
                best_f = f;
                best_w = w;
            }
        }
    }
    return best_w;
}

} // namespace

SmoothingPlan choose_pr(int mr, int n)
{
    if (mr < 2)
        throw infeasible_rank_error("choose_pr: receive smoothing needs mr >= 2, got mr = " +
                                    std::to_string(mr));
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("choose_pr: pilot length must be even and >= 2");
    SmoothingPlan best{0, 0, -1};
    for (int pr = 2; pr <= mr; ++pr)
    {
        const int qr = mr + 1 - pr;
        const int kmax = std::min(4 * (pr - 1), qr * (n / 2));
        if (kmax >= best.kmax)
            best = {pr, qr, kmax};
    }
    return best;
}

MatC ctd_unfold_z(const MatC& x, int mr)
{
    check_observation(x, mr);
    const Eigen::Index half = x.cols() / 2;
    MatC z(mr * half, 4);
    for (int p = 0; p < 4; ++p)
    {
        const auto block = x.block((p / 2) * mr, (p % 2) * half, mr, half);
        for (int m = 0; m < mr; ++m)
            for (Eigen::Index t = 0; t < half; ++t)
                z(m * half + t, p) = block(m, t);
    }
    return z;
}

MatC ctd_unfold_xprime(const MatC& x, int mr)
{
    check_observation(x, mr);
    const Eigen::Index half = x.cols() / 2;
    MatC xp(4 * mr, half);
    for (int p = 0; p < 4; ++p)
    {
        const auto block = x.block((p / 2) * mr, (p % 2) * half, mr, half);
        for (int m = 0; m < mr; ++m)
            xp.row(m * 4 + p) = block.row(m);
    }
    return xp;
}

MatC ctd_smooth(const MatC& xprime, int pr)
{
    if (xprime.rows() % 4 != 0)
        throw std::invalid_argument("ctd_smooth: row count must be a multiple of 4");
    const int mr = static_cast<int>(xprime.rows()) / 4;
    if (pr < 1 || pr > mr)
        throw std::invalid_argument("ctd_smooth: pr must be in 1..mr");
    const Eigen::Index half = xprime.cols();
    const int qr = mr + 1 - pr;
    MatC xs(4 * pr, qr * half);
    for (int w = 0; w < qr; ++w)
        xs.block(0, w * half, 4 * pr, half) = xprime.middleRows(4 * w, 4 * pr);
    return xs;
}

EspritResult smoothed_esprit(const MatC& xprime, int k, int pr)
{
    if (xprime.rows() % 4 != 0)
        throw std::invalid_argument("smoothed_esprit: row count must be a multiple of 4");
    const int mr = static_cast<int>(xprime.rows()) / 4;
    const Eigen::Index half = xprime.cols();
    if (pr < 2 || pr > mr)
        throw std::invalid_argument("smoothed_esprit: pr must be in 2..mr");
    if (k < 1)
        throw std::invalid_argument("smoothed_esprit: need k >= 1");
    const int qr = mr + 1 - pr;
    const int kmax = std::min<Eigen::Index>(4 * (pr - 1), qr * half);
    if (k > kmax)
        throw infeasible_rank_error("smoothed_esprit: k = " + std::to_string(k) +
                                    " exceeds the smoothing bound kmax = " + std::to_string(kmax));

    const MatC xs = ctd_smooth(xprime, pr);
    Eigen::JacobiSVD<MatC> svd(xs, Eigen::ComputeThinU);
    const MatC us = svd.matrixU().leftCols(k);
    const MatC psi = pinv(us.topRows(4 * (pr - 1))) * us.bottomRows(4 * (pr - 1));
    Eigen::ComplexEigenSolver<MatC> es(psi);
    if (es.info() != Eigen::Success)
        throw degenerate_path_error("smoothed_esprit: pencil eigendecomposition failed");
    const VecC z = es.eigenvalues();
    const MatC m = us * es.eigenvectors();

    EspritResult out;
    out.omega_r.resize(k);
    out.b.resize(4, k);
    out.min_separation = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j)
        out.omega_r(j) = std::arg(z(j));
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
        {
            const double d =
                std::abs(std::polar(1.0, out.omega_r(i)) - std::polar(1.0, out.omega_r(j)));
            out.min_separation = std::min(out.min_separation, d);
        }

    // Each pencil eigenvector column is proportional to a_{pr} kron b;
    // folded column-major it is the rank-1 matrix b a^T.
    for (int j = 0; j < k; ++j)
    {
        const Eigen::Map<const MatC> r(m.col(j).data(), 4, pr);
        const VecC a = steering_ula(out.omega_r(j), pr);
        out.b.col(j) = r * a.conjugate() / a.squaredNorm();
    }

    MatC ar(mr, k);
    for (int j = 0; j < k; ++j)
        ar.col(j) = steering_ula(out.omega_r(j), mr);
    out.e = (pinv(khatri_rao(ar, out.b)) * xprime).transpose().conjugate();
    return out;
}

double dod_objective(double omega_x, double omega_y, const VecC& e, const MatR& q, int mx,
                     int my)
{
    const VecC at = steering_ura(omega_x, omega_y, mx, my);
    const VecC u = q.transpose().cast<cd>() * at;
    const double e2 = e.squaredNorm();
    if (!(e2 > 0.0))
        throw degenerate_path_error("dod_objective: zero signature vector");
    return u.squaredNorm() - std::norm(e.dot(u)) / e2;
}

Eigen::Vector2d dod_gradient(double omega_x, double omega_y, const VecC& e, const MatR& q,
                             int mx, int my)
{
    const VecC ax = steering_ula(omega_x, mx);
    const VecC ay = steering_ula(omega_y, my);
    VecC at(mx * my), dat_x(mx * my), dat_y(mx * my);
    const cd jj(0.0, 1.0);
    for (int ly = 0; ly < my; ++ly)
        for (int lx = 0; lx < mx; ++lx)
        {
            const Eigen::Index i = static_cast<Eigen::Index>(ly) * mx + lx;
            at(i) = ay(ly) * ax(lx);
            dat_x(i) = jj * static_cast<double>(lx) * at(i);
            dat_y(i) = jj * static_cast<double>(ly) * at(i);
        }
    const MatC qt = q.transpose().cast<cd>();
    const VecC u = qt * at;
    const double e2 = e.squaredNorm();
    if (!(e2 > 0.0))
        throw degenerate_path_error("dod_gradient: zero signature vector");
    const VecC pu = u - e * (e.dot(u) / e2);
    const VecC ux = qt * dat_x;
    const VecC uy = qt * dat_y;
    return {2.0 * std::real(ux.dot(pu)), 2.0 * std::real(uy.dot(pu))};
}

DodPhases recover_dod(const VecC& e, const MatR& q, const ArrayGeometry& geom,
                      const CtdOptions& opts)
{
    geom.validate();
    const int mx = geom.mx;
    const int my = geom.my;
    if (q.rows() != mx * my)
        throw std::invalid_argument("recover_dod: q must have mx*my rows");
    if (e.size() != q.cols())
        throw std::invalid_argument("recover_dod: signature length must match the pilot");
    const double e2 = e.squaredNorm();
    if (!(e2 > 0.0))
        throw degenerate_path_error("recover_dod: zero signature vector");

    const double wx_max = std::min(M_PI, 2.0 * M_PI * geom.dx / geom.wavelength);
    const double wy_max = std::min(M_PI, 2.0 * M_PI * geom.dy / geom.wavelength);

    // Degenerate transmit axes reduce to 1-D single-tone problems that
    // polynomial rooting solves directly, without refinement.
    if (my == 1 || mx == 1)
    {
        const int m = my == 1 ? mx : my;
        const VecC en = e / std::sqrt(e2);
        const MatC qc = q.cast<cd>();
        const MatC proj = MatC::Identity(e.size(), e.size()) - en * en.adjoint();
        const MatC c = qc * proj * qc.transpose();
        DodPhases out;
        if (my == 1)
        {
            out.omega_x = root_music_1d(c, m, 0.0, wx_max);
            out.omega_y = 0.0;
        }
        else
        {
            out.omega_x = 0.0;
            out.omega_y = root_music_1d(c, m, -wy_max, wy_max);
        }
        out.objective = dod_objective(out.omega_x, out.omega_y, e, q, mx, my);
        return out;
    }

    // Coarse grid: precompute per-row compressions of ax so each (wx, wy)
    // cell costs only a small matrix-vector product.
    const double step_x = k_grid_step_scale / mx;
    const double step_y = k_grid_step_scale / my;
    std::vector<double> xs, ys;
    for (double w = 0.0; w < wx_max; w += step_x)
        xs.push_back(w);
    xs.push_back(wx_max);
    for (double w = -wy_max; w < wy_max; w += step_y)
        ys.push_back(w);
    ys.push_back(wy_max);

    const Eigen::Index half = q.cols();
    std::vector<VecC> ay_cache(ys.size());
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
        ay_cache[iy] = steering_ula(ys[iy], my);

    const VecC en = e / std::sqrt(e2);
    double best_f = std::numeric_limits<double>::infinity();
    double best_wx = 0.0;
    double best_wy = 0.0;
    MatC v(half, my);
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
    {
        const VecC ax = steering_ula(xs[ix], mx);
        for (int ly = 0; ly < my; ++ly)
            v.col(ly) = q.middleRows(ly * mx, mx).transpose().cast<cd>() * ax;
        for (std::size_t iy = 0; iy < ys.size(); ++iy)
        {
            const VecC u = v * ay_cache[iy];
            const double f = u.squaredNorm() - std::norm(en.dot(u));
            if (f < best_f)
            {
                best_f = f;
                best_wx = xs[ix];
                best_wy = ys[iy];
            }
        }
    }

    // Gradient descent with backtracking from the best grid cell.
    double wx = best_wx;
    double wy = best_wy;
    double f = dod_objective(wx, wy, e, q, mx, my);
    for (int it = 0; it < opts.max_grad_iters; ++it)
    {
        const Eigen::Vector2d g = dod_gradient(wx, wy, e, q, mx, my);
        const double gn = g.norm();
        if (gn < opts.grad_norm_tol)
            break;
        double step = 1.0;
        bool moved = false;
        while (step > 1e-16)
        {
            const double cx = std::clamp(wx - step * g(0), 0.0, wx_max);
            const double cy = std::clamp(wy - step * g(1), -wy_max, wy_max);
            if (cx == wx && cy == wy)
            {
                step *= 0.5;
                continue;
            }
            const double cf = dod_objective(cx, cy, e, q, mx, my);
            if (cf <= f - 1e-4 * step * gn * gn)
            {
                wx = cx;
                wy = cy;
                f = cf;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    return {wx, wy, f};
}

CtdEstimate ctd_estimate(const ReceivedData& data, const PilotMatrix& pilot,
                         const ArrayGeometry& geom, int k, const CtdOptions& opts)
{
    geom.validate();
    if (pilot.kind != PilotKind::frugal)
        throw std::invalid_argument("ctd_estimate: requires the frugal pilot");
    const int mr = geom.mr;
    const int mt = geom.mt();
    const Eigen::Index n = pilot.s.cols();
    if (pilot.q.rows() != mt || 2 * pilot.q.cols() != n)
        throw std::invalid_argument("ctd_estimate: pilot does not match the geometry");
    if (data.x.rows() != 2 * mr || data.x.cols() != n)
        throw std::invalid_argument("ctd_estimate: observation size mismatch");
    if (k < 1)
        throw std::invalid_argument("ctd_estimate: need k >= 1");

    CtdEstimate est;
    est.plan = choose_pr(mr, static_cast<int>(n));
    if (k > est.plan.kmax)
        throw infeasible_rank_error("ctd_estimate: k = " + std::to_string(k) +
                                    " exceeds the smoothing bound kmax = " +
                                    std::to_string(est.plan.kmax));

    const MatC xprime = ctd_unfold_xprime(data.x, mr);
    const EspritResult esprit = smoothed_esprit(xprime, k, est.plan.pr);
    est.esprit_min_separation = esprit.min_separation;

    std::vector<DodPhases> dods(k);
    parallel_for(opts.exec, k,
                 [&](std::int64_t j) { dods[j] = recover_dod(esprit.e.col(j), pilot.q, geom, opts); });

    est.phases.resize(k);
    est.paths.theta.resize(k);
    est.paths.vartheta.resize(k);
    est.paths.phi.resize(k);
    MatC ar(mr, k);
    MatC at(mt, k);
    for (int j = 0; j < k; ++j)
    {
        est.phases[j] = {esprit.omega_r(j), dods[j].omega_x, dods[j].omega_y};
        ar.col(j) = steering_ula(est.phases[j].omega_r, mr);
        at.col(j) = steering_ura(est.phases[j].omega_x, est.phases[j].omega_y, geom.mx, geom.my);
        PhaseTriple reported = est.phases[j];
        est.projected_paths += project_phases(reported, geom) ? 1 : 0;
        const PathAngles ang = angles_from_phases(reported, geom);
        est.paths.theta(j) = ang.theta;
        est.paths.vartheta(j) = ang.vartheta;
        est.paths.phi(j) = ang.phi;
    }

    // Final loss refit against the compressed model so the per-path pencil
    // scalings cancel.
    const MatC z = ctd_unfold_z(data.x, mr);
    const MatC e_star = pilot.q.cast<cd>().transpose() * at.conjugate();
    est.paths.pathloss = (pinv(khatri_rao(ar, e_star)) * z).transpose();
    est.paths.kappa = 0.0;
    return est;
}

} // namespace ddpchan

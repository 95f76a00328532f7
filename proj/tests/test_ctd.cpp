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

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

using namespace ddpchan;
using ddpchan::test::max_abs_diff;
using ddpchan::test::random_complex;
using ddpchan::test::random_phases;
using ddpchan::test::sorted_diff;
using ddpchan::test::vandermonde;

namespace
{

MatR random_real(int rows, int cols, Rng& rng)
{
    MatR m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            m(r, c) = rng.gaussian();
    return m;
}

struct CompressedModel
{
    int mr, mt, half;
    VecR wr;
    MatC ar; // mr-by-k receive steering
    MatC at; // mt-by-k transmit steering
    MatC b;  // 4-by-k
    MatR q;  // mt-by-half compression block
    MatC e;  // half-by-k, e = q^T conj(at)
    MatC x;  // 2mr-by-2*half frugal observation
};

CompressedModel make_compressed(int mr, int mx, int my, int half, int k, Rng& rng)
{
    CompressedModel m;
    m.mr = mr;
    m.mt = mx * my;
    m.half = half;
    ArrayGeometry g;
    g.mr = mr;
    g.mx = mx;
    g.my = my;
    m.wr = random_phases(k, -2.5, 2.5, rng);
    const VecR wx = random_phases(k, 0.1, 2.9, rng);
    const VecR wy = random_phases(k, -2.9, 2.9, rng);
    m.ar = vandermonde(m.wr, mr);
    m.at.resize(m.mt, k);
    for (int j = 0; j < k; ++j)
        m.at.col(j) = steering_ura(wx(j), wy(j), mx, my);
    m.b = random_complex(4, k, rng);
    m.q = random_real(m.mt, half, rng);
    m.e = m.q.transpose().cast<cd>() * m.at.conjugate();

    // Assemble the four polarization blocks of x = H * blockdiag(q, q).
    m.x = MatC::Zero(2 * mr, 2 * half);
    for (int p = 0; p < 4; ++p)
    {
        const MatC hpq = m.ar * VecC(m.b.row(p).transpose()).asDiagonal() * m.at.adjoint();
        m.x.block((p / 2) * mr, (p % 2) * half, mr, half) = hpq * m.q.cast<cd>();
    }
    return m;
}

} // namespace

TEST_CASE("smoothing plan picks the pinned tradeoffs", "[ctd]")
{
    SmoothingPlan p = choose_pr(3, 16);
    REQUIRE(p.pr == 3);
    REQUIRE(p.qr == 1);
    REQUIRE(p.kmax == 8);

    p = choose_pr(2, 8);
    REQUIRE(p.pr == 2);
    REQUIRE(p.qr == 1);
    REQUIRE(p.kmax == 4);

    p = choose_pr(8, 16);
    REQUIRE(p.pr == 6);
    REQUIRE(p.qr == 3);
    REQUIRE(p.kmax == 20);

    // Equal objective at pr = 2 and pr = 3 resolves to the larger pr.
    p = choose_pr(3, 8);
    REQUIRE(p.pr == 3);
    REQUIRE(p.kmax == 4);

    REQUIRE_THROWS_AS(choose_pr(1, 16), infeasible_rank_error);
    REQUIRE_THROWS_AS(choose_pr(3, 7), std::invalid_argument);
}

TEST_CASE("compressed unfoldings match the block layout and the factor model", "[ctd]")
{
    Rng rng(61);
    const CompressedModel m = make_compressed(3, 4, 4, 8, 3, rng);

    const MatC z = ctd_unfold_z(m.x, m.mr);
    const MatC xp = ctd_unfold_xprime(m.x, m.mr);
    REQUIRE(z.rows() == m.mr * m.half);
    REQUIRE(z.cols() == 4);
    REQUIRE(xp.rows() == 4 * m.mr);
    REQUIRE(xp.cols() == m.half);

    // Index-level oracle from the quadrant blocks of x.
    for (int p = 0; p < 4; ++p)
        for (int row = 0; row < m.mr; ++row)
            for (int t = 0; t < m.half; ++t)
            {
                const cd v = m.x((p / 2) * m.mr + row, (p % 2) * m.half + t);
                REQUIRE(z(row * m.half + t, p) == v);
                REQUIRE(xp(row * 4 + p, t) == v);
            }

    // Khatri-Rao factorization of both unfoldings.
    REQUIRE(max_abs_diff(z, khatri_rao(m.ar, m.e) * m.b.transpose()) < 1e-10);
    REQUIRE(max_abs_diff(xp, khatri_rao(m.ar, m.b) * m.e.transpose()) < 1e-10);
}

TEST_CASE("smoothing stacks shifted subarrays and factors accordingly", "[ctd]")
{
    Rng rng(62);
    const CompressedModel m = make_compressed(4, 4, 4, 6, 3, rng);
    const MatC xp = ctd_unfold_xprime(m.x, m.mr);
    const int pr = 3;
    const int qr = m.mr + 1 - pr;
    const MatC xs = ctd_smooth(xp, pr);
    REQUIRE(xs.rows() == 4 * pr);
    REQUIRE(xs.cols() == qr * m.half);

    for (int w = 0; w < qr; ++w)
        REQUIRE(max_abs_diff(xs.middleCols(w * m.half, m.half),
                             xp.middleRows(4 * w, 4 * pr)) == 0.0);

    const MatC lhs = khatri_rao(m.ar.topRows(pr), m.b);
    const MatC rhs = khatri_rao(m.ar.topRows(qr), m.e);
    REQUIRE(max_abs_diff(xs, lhs * rhs.transpose()) < 1e-10);
}

TEST_CASE("smoothed esprit recovers receive phases and signatures", "[ctd]")
{
    Rng rng(63);
    const int k = 4;
    const CompressedModel m = make_compressed(3, 4, 4, 8, k, rng);
    const MatC xp = ctd_unfold_xprime(m.x, m.mr);
    const SmoothingPlan plan = choose_pr(m.mr, 2 * m.half);
    REQUIRE(k <= plan.kmax);
    const EspritResult res = smoothed_esprit(xp, k, plan.pr);

    REQUIRE(res.omega_r.size() == k);
    REQUIRE(sorted_diff(res.omega_r, m.wr) < 1e-8);
    REQUIRE(res.min_separation > 0.0);

    // Scale-consistent rank-one refit reproduces the observation.
    const MatC ar_hat = vandermonde(res.omega_r, m.mr);
    const MatC rec = khatri_rao(ar_hat, res.b) * res.e.conjugate().transpose();
    REQUIRE((rec - xp).norm() / xp.norm() < 1e-8);

    // Polarimetric signatures are collinear with the truth per matched path.
    for (int j = 0; j < k; ++j)
    {
        int match = 0;
        double best = 1e9;
        for (int t = 0; t < k; ++t)
            if (std::abs(res.omega_r(j) - m.wr(t)) < best)
            {
                best = std::abs(res.omega_r(j) - m.wr(t));
                match = t;
            }
        const VecC bj = res.b.col(j);
        const VecC bt = m.b.col(match);
        const double cosang = std::abs(bj.dot(bt)) / (bj.norm() * bt.norm());
        REQUIRE(cosang == Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("esprit validates rank feasibility", "[ctd]")
{
    Rng rng(64);
    const CompressedModel m = make_compressed(3, 4, 4, 8, 2, rng);
    const MatC xp = ctd_unfold_xprime(m.x, m.mr);
    REQUIRE_THROWS_AS(smoothed_esprit(xp, 9, 3), infeasible_rank_error);
    REQUIRE_THROWS_AS(smoothed_esprit(xp, 0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(smoothed_esprit(xp, 2, 1), std::invalid_argument);
}

TEST_CASE("departure objective vanishes only on the true signature", "[ctd]")
{
    Rng rng(65);
    const int mx = 4, my = 4;
    const MatR q = random_real(mx * my, 10, rng);
    const double wx = 1.2, wy = -0.7;
    const VecC e = q.transpose().cast<cd>() * steering_ura(wx, wy, mx, my);

    REQUIRE(dod_objective(wx, wy, e, q, mx, my) < 1e-18);
    REQUIRE(dod_objective(wx + 0.3, wy, e, q, mx, my) > 1e-3);
    REQUIRE(dod_objective(wx, wy + 0.4, e, q, mx, my) > 1e-3);

    // Invariance to complex rescaling of the signature.
    const VecC scaled = cd(0.3, -2.1) * e;
    REQUIRE(dod_objective(wx + 0.3, wy, scaled, q, mx, my) ==
            Catch::Approx(dod_objective(wx + 0.3, wy, e, q, mx, my)).margin(1e-9));
}

TEST_CASE("departure gradient matches central differences", "[ctd]")
{
    Rng rng(66);
    const int mx = 4, my = 3;
    const MatR q = random_real(mx * my, 8, rng);
    const VecC e = q.transpose().cast<cd>() * steering_ura(0.9, 0.4, mx, my);
    const double h = 1e-6;
    for (int i = 0; i < 25; ++i)
    {
        const double wx = rng.uniform(0.05, 3.0);
        const double wy = rng.uniform(-3.0, 3.0);
        const Eigen::Vector2d g = dod_gradient(wx, wy, e, q, mx, my);
        const double fdx = (dod_objective(wx + h, wy, e, q, mx, my) -
                            dod_objective(wx - h, wy, e, q, mx, my)) /
                           (2 * h);
        const double fdy = (dod_objective(wx, wy + h, e, q, mx, my) -
                            dod_objective(wx, wy - h, e, q, mx, my)) /
                           (2 * h);
        const double scale = std::max(1.0, std::hypot(fdx, fdy));
        REQUIRE(std::abs(g(0) - fdx) / scale < 1e-5);
        REQUIRE(std::abs(g(1) - fdy) / scale < 1e-5);
    }
}

TEST_CASE("departure search finds the planted phases", "[ctd]")
{
    Rng rng(67);
    ArrayGeometry g;
    g.mr = 3;
    g.mx = 4;
    g.my = 4;
    for (int i = 0; i < 8; ++i)
    {
        const double wx = rng.uniform(0.05, M_PI - 0.05);
        const double wy = rng.uniform(-M_PI + 0.05, M_PI - 0.05);
        const MatR q = random_real(g.mt(), 12, rng);
        const VecC e = q.transpose().cast<cd>() * steering_ura(wx, wy, g.mx, g.my);
        const DodPhases hat = recover_dod(e, q, g);
        REQUIRE(hat.omega_x == Catch::Approx(wx).margin(1e-6));
        REQUIRE(hat.omega_y == Catch::Approx(wy).margin(1e-6));
        REQUIRE(hat.objective < 1e-12);
    }
}

TEST_CASE("single-row arrays fall back to polynomial rooting", "[ctd]")
{
    Rng rng(68);
    ArrayGeometry g;
    g.mr = 3;
    g.mx = 8;
    g.my = 1;
    for (int i = 0; i < 6; ++i)
    {
        const double wx = rng.uniform(0.1, M_PI - 0.1);
        const MatR q = random_real(g.mt(), 10, rng);
        const VecC e = q.transpose().cast<cd>() * steering_ura(wx, 0.0, g.mx, g.my);
        const DodPhases hat = recover_dod(e, q, g);
        REQUIRE(hat.omega_x == Catch::Approx(wx).margin(1e-6));
        REQUIRE(hat.omega_y == 0.0);
    }

    ArrayGeometry gc;
    gc.mr = 3;
    gc.mx = 1;
    gc.my = 8;
    const double wy = 1.3;
    const MatR q = random_real(gc.mt(), 10, rng);
    const VecC e = q.transpose().cast<cd>() * steering_ura(0.0, wy, gc.mx, gc.my);
    const DodPhases hat = recover_dod(e, q, gc);
    REQUIRE(hat.omega_y == Catch::Approx(wy).margin(1e-6));
    REQUIRE(hat.omega_x == 0.0);
}

TEST_CASE("ctd pipeline recovers paths from noiseless frugal data", "[ctd]")
{
    ArrayGeometry g;
    g.mr = 3;
    g.mx = 4;
    g.my = 4;
    Rng rng(69);
    const int k = 3;
    const PathParams truth = sample_paths(k, 13.2, rng);
    const ChannelMatrix ch = synthesize_channel(truth, g);
    const PilotMatrix pilot = make_frugal_pilot(g.mt(), 16, rng);
    const ReceivedData data = transmit(ch, pilot, std::nullopt, rng);

    const CtdEstimate est = ctd_estimate(data, pilot, g, k);
    REQUIRE(est.plan.pr == 3);
    REQUIRE(est.plan.kmax == 8);
    REQUIRE(est.paths.num_paths() == k);

    const PathMatch match = match_paths(est.paths, truth);
    REQUIRE(match.theta_err.maxCoeff() < 1e-6);
    REQUIRE(match.vartheta_err.maxCoeff() < 1e-6);
    REQUIRE(match.phi_err.maxCoeff() < 1e-6);

    const ChannelMatrix rec =
        synthesize_from_phases(est.phases, est.paths.pathloss, g);
    REQUIRE(nmse(rec, ch) < 1e-9);
}

TEST_CASE("ctd pipeline validates its inputs", "[ctd]")
{
    ArrayGeometry g;
    g.mr = 3;
    g.mx = 4;
    g.my = 4;
    Rng rng(70);
    const PathParams truth = sample_paths(2, 13.2, rng);
    const ChannelMatrix ch = synthesize_channel(truth, g);
    const PilotMatrix frugal = make_frugal_pilot(g.mt(), 16, rng);
    const ReceivedData data = transmit(ch, frugal, std::nullopt, rng);

    REQUIRE_THROWS_AS(ctd_estimate(data, frugal, g, 9), infeasible_rank_error);
    REQUIRE_THROWS_AS(ctd_estimate(data, frugal, g, 0), std::invalid_argument);

    const PilotMatrix orth = make_orthogonal_pilot(g.mt(), 2 * g.mt(), rng);
    const ReceivedData odata = transmit(ch, orth, std::nullopt, rng);
    REQUIRE_THROWS_AS(ctd_estimate(odata, orth, g, 2), std::invalid_argument);
}

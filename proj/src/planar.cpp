#include "smt/planar.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <unordered_map>

#include "smt/common.hpp"
#include "smt/core.hpp"

namespace smt {

// ============================================================
// domain builders
// ============================================================

// Both builders put nodes at (k + 1/2) h in each coordinate, so no node ever
// lands on a lattice-aligned special point (pole, origin, domain center).

PlanarDomain make_disk_domain(double R, double h, double px, double py) {
    if (!(R > 0.0) || !(h > 0.0) || h >= R)
        throw domain_error("make_disk_domain: need 0 < h < R");
    if (px * px + py * py >= R * R)
        throw domain_error("make_disk_domain: pole must be strictly inside");
    const int K = static_cast<int>(std::ceil((R + 1.5 * h) / h));
    PlanarDomain dom;
    dom.nx = dom.ny = 2 * K;
    dom.h = h;
    dom.ox = dom.oy = (0.5 - K) * h;
    dom.px = px;
    dom.py = py;
    dom.mask.assign(std::size_t(dom.nx) * dom.ny, 0);
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            const double x = dom.x_of(i), y = dom.y_of(j);
            if (x * x + y * y < R * R) dom.mask[dom.idx(i, j)] = 1;
        }
    return dom;
}

PlanarDomain make_rect_domain(double x_lo, double x_hi, double y_lo, double y_hi, double h,
                              double px, double py) {
    if (!(h > 0.0) || !(x_hi - x_lo > 2 * h) || !(y_hi - y_lo > 2 * h))
        throw domain_error("make_rect_domain: degenerate rectangle or h too large");
    if (!(px > x_lo && px < x_hi && py > y_lo && py < y_hi))
        throw domain_error("make_rect_domain: pole must be strictly inside");
    const int ix_lo = static_cast<int>(std::floor(x_lo / h - 0.5)) - 1;
    const int ix_hi = static_cast<int>(std::ceil(x_hi / h - 0.5)) + 1;
    const int iy_lo = static_cast<int>(std::floor(y_lo / h - 0.5)) - 1;
    const int iy_hi = static_cast<int>(std::ceil(y_hi / h - 0.5)) + 1;
    PlanarDomain dom;
    dom.nx = ix_hi - ix_lo + 1;
    dom.ny = iy_hi - iy_lo + 1;
    dom.h = h;
    dom.ox = (ix_lo + 0.5) * h;
    dom.oy = (iy_lo + 0.5) * h;
    dom.px = px;
    dom.py = py;
    dom.mask.assign(std::size_t(dom.nx) * dom.ny, 0);
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            const double x = dom.x_of(i), y = dom.y_of(j);
            if (x > x_lo && x < x_hi && y > y_lo && y < y_hi) dom.mask[dom.idx(i, j)] = 1;
        }
    return dom;
}

// ============================================================
// conjugate gradients for the 5-point Laplacian
// ============================================================

DirichletSolution solve_dirichlet(const PlanarDomain& dom,
                                  const std::function<double(double, double)>& g, par::exec mode,
                                  double tol, int max_iters) {
    const int nx = dom.nx, ny = dom.ny;
    std::vector<int> comp(std::size_t(nx) * ny, -1);
    std::vector<int> ci, cj;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (dom.mask[dom.idx(i, j)]) {
                comp[dom.idx(i, j)] = static_cast<int>(ci.size());
                ci.push_back(i);
                cj.push_back(j);
            }
    const std::size_t m = ci.size();
    if (m == 0) throw domain_error("solve_dirichlet: no interior nodes");

    std::vector<double> b(m, 0.0);
    par::for_index(m, mode, [&](std::size_t k) {
        const int i = ci[k], j = cj[k];
        double rhs = 0.0;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int e = 0; e < 4; ++e) {
            const int inb = i + di[e], jnb = j + dj[e];
            if (!dom.interior(inb, jnb)) rhs += g(dom.x_of(inb), dom.y_of(jnb));
        }
        b[k] = rhs;
    });

    auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
        par::for_index(m, mode, [&](std::size_t k) {
            const int i = ci[k], j = cj[k];
            double acc = 4.0 * x[k];
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int e = 0; e < 4; ++e) {
                const int inb = i + di[e], jnb = j + dj[e];
                if (dom.interior(inb, jnb)) acc -= x[comp[dom.idx(inb, jnb)]];
            }
            out[k] = acc;
        });
    };
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& c) {
        return par::block_sum(m, mode, [&](std::size_t k) { return a[k] * c[k]; });
    };

    std::vector<double> x(m, 0.0), r = b, p = b, Ap(m);
    const double bb = dot(b, b);
    double rr = bb;
    int it = 0;
    if (bb > 0.0) {
        for (; it < max_iters; ++it) {
            if (rr <= tol * tol * bb) break;
            apply(p, Ap);
            const double pAp = dot(p, Ap);
            if (!(pAp > 0.0)) break;
            const double alpha = rr / pAp;
            par::for_index(m, mode, [&](std::size_t k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * Ap[k];
            });
            const double rr_new = dot(r, r);
            const double beta = rr_new / rr;
            rr = rr_new;
            par::for_index(m, mode, [&](std::size_t k) { p[k] = r[k] + beta * p[k]; });
        }
    }

    DirichletSolution sol;
    sol.iterations = it;
    sol.residual = bb > 0.0 ? std::sqrt(rr / bb) : 0.0;
    sol.full.assign(std::size_t(nx) * ny, 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t id = dom.idx(i, j);
            sol.full[id] = comp[id] >= 0 ? x[comp[id]] : g(dom.x_of(i), dom.y_of(j));
        }
    return sol;
}

// ============================================================
// grid Green function
// ============================================================

namespace {

struct CellLocator {
    int i, j;
    double fx, fy;
};

CellLocator locate_cell(const PlanarDomain& dom, double x, double y) {
    double u = (x - dom.ox) / dom.h;
    double v = (y - dom.oy) / dom.h;
    int i = static_cast<int>(std::floor(u));
    int j = static_cast<int>(std::floor(v));
    i = std::max(0, std::min(dom.nx - 2, i));
    j = std::max(0, std::min(dom.ny - 2, j));
    return {i, j, u - i, v - j};
}

double bilinear(const PlanarDomain& dom, const std::vector<double>& f, double x, double y) {
    const CellLocator c = locate_cell(dom, x, y);
    const double f00 = f[dom.idx(c.i, c.j)], f10 = f[dom.idx(c.i + 1, c.j)];
    const double f01 = f[dom.idx(c.i, c.j + 1)], f11 = f[dom.idx(c.i + 1, c.j + 1)];
    return (1 - c.fx) * (1 - c.fy) * f00 + c.fx * (1 - c.fy) * f10 + (1 - c.fx) * c.fy * f01 +
           c.fx * c.fy * f11;
}

}  // namespace

double PlanarGreen::H_at(double x, double y) const { return bilinear(dom, Hfull, x, y); }

double PlanarGreen::value(double x, double y) const {
    const double c = 1.0 / (2.0 * M_PI);
    const double r = std::hypot(x - dom.px, y - dom.py);
    if (!(r > 0.0)) throw domain_error("PlanarGreen::value: point coincides with the pole");
    return -c * std::log(r) + H_at(x, y);
}

std::array<double, 2> PlanarGreen::gradient(double x, double y) const {
    const double c = 1.0 / (2.0 * M_PI);
    const double dx = x - dom.px, dy = y - dom.py;
    const double r2 = dx * dx + dy * dy;
    if (!(r2 > 0.0)) throw domain_error("PlanarGreen::gradient: point coincides with the pole");
    // central differences of H at the four surrounding nodes, then bilinear
    auto dH = [&](int i, int j, bool in_x) {
        const int n_hi = in_x ? dom.nx : dom.ny;
        const int v = in_x ? i : j;
        const int lo = std::max(0, v - 1), hi = std::min(n_hi - 1, v + 1);
        const double f_hi = Hfull[in_x ? dom.idx(hi, j) : dom.idx(i, hi)];
        const double f_lo = Hfull[in_x ? dom.idx(lo, j) : dom.idx(i, lo)];
        return (f_hi - f_lo) / ((hi - lo) * dom.h);
    };
    const CellLocator cl = locate_cell(dom, x, y);
    double gx = 0.0, gy = 0.0;
    const double wx[2] = {1 - cl.fx, cl.fx};
    const double wy[2] = {1 - cl.fy, cl.fy};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double w = wx[a] * wy[b];
            gx += w * dH(cl.i + a, cl.j + b, true);
            gy += w * dH(cl.i + a, cl.j + b, false);
        }
    return {-c * dx / r2 + gx, -c * dy / r2 + gy};
}

PlanarGreen solve_planar_green(const PlanarDomain& dom, par::exec mode, double tol) {
    const double c = 1.0 / (2.0 * M_PI);
    auto data = [&](double x, double y) {
        const double r = std::hypot(x - dom.px, y - dom.py);
        return c * std::log(r);
    };
    DirichletSolution sol = solve_dirichlet(dom, data, mode, tol);

    PlanarGreen pg;
    pg.dom = dom;
    pg.Hfull = std::move(sol.full);
    pg.cg_iterations = sol.iterations;
    pg.cg_residual = sol.residual;
    pg.I = std::exp(2.0 * M_PI * bilinear(dom, pg.Hfull, dom.px, dom.py));
    pg.Gfull.assign(pg.Hfull.size(), 0.0);
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            const std::size_t id = dom.idx(i, j);
            // exterior nodes carry H = c log r exactly, so G = 0 there
            if (dom.mask[id])
                pg.Gfull[id] = -c * std::log(std::hypot(dom.x_of(i) - dom.px, dom.y_of(j) - dom.py)) +
                               pg.Hfull[id];
        }
    return pg;
}

double grid_energy(const PlanarDomain& dom, const std::vector<double>& full_values) {
    if (full_values.size() != dom.mask.size())
        throw range_error("grid_energy: values and mask sizes differ");
    double acc = 0.0;
    for (int j = 0; j < dom.ny; ++j)
        for (int i = 0; i + 1 < dom.nx; ++i) {
            const double d = full_values[dom.idx(i + 1, j)] - full_values[dom.idx(i, j)];
            acc += d * d;
        }
    for (int j = 0; j + 1 < dom.ny; ++j)
        for (int i = 0; i < dom.nx; ++i) {
            const double d = full_values[dom.idx(i, j + 1)] - full_values[dom.idx(i, j)];
            acc += d * d;
        }
    return acc;
}

// ============================================================
// marching squares
// ============================================================

namespace {

// grid-edge ids: horizontal edge (i,j)-(i+1,j) -> 2*(j*nx+i), vertical
// (i,j)-(i,j+1) -> 2*(j*nx+i)+1
struct Segment {
    std::int64_t from, to;
};

std::array<double, 2> edge_point(const PlanarDomain& dom, const std::vector<double>& f,
                                 std::int64_t id, double t) {
    const bool vertical = (id & 1) != 0;
    const std::int64_t cell = id >> 1;
    const int i = static_cast<int>(cell % dom.nx);
    const int j = static_cast<int>(cell / dom.nx);
    const double fa = f[dom.idx(i, j)];
    const double fb = vertical ? f[dom.idx(i, j + 1)] : f[dom.idx(i + 1, j)];
    const double lam = (t - fa) / (fb - fa);
    const double x = dom.x_of(i) + (vertical ? 0.0 : lam * dom.h);
    const double y = dom.y_of(j) + (vertical ? lam * dom.h : 0.0);
    return {x, y};
}

}  // namespace

std::vector<Polyline> level_curves(const PlanarGreen& pg, double t) {
    if (!(t > 0.0)) throw range_error("level_curves: need t > 0 (G vanishes on the boundary)");
    const PlanarDomain& dom = pg.dom;
    const std::vector<double>& f = pg.Gfull;
    std::vector<Segment> segs;
    std::unordered_map<std::int64_t, std::size_t> by_from;

    for (int j = 0; j + 1 < dom.ny; ++j)
        for (int i = 0; i + 1 < dom.nx; ++i) {
            const double v00 = f[dom.idx(i, j)], v10 = f[dom.idx(i + 1, j)];
            const double v11 = f[dom.idx(i + 1, j + 1)], v01 = f[dom.idx(i, j + 1)];
            const int code = (v00 > t ? 1 : 0) | (v10 > t ? 2 : 0) | (v11 > t ? 4 : 0) |
                             (v01 > t ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const std::int64_t B = 2 * (std::int64_t(j) * dom.nx + i);
            const std::int64_t T = 2 * (std::int64_t(j + 1) * dom.nx + i);
            const std::int64_t L = 2 * (std::int64_t(j) * dom.nx + i) + 1;
            const std::int64_t R = 2 * (std::int64_t(j) * dom.nx + i + 1) + 1;
            auto emit = [&](std::int64_t a, std::int64_t b) {
                by_from.emplace(a, segs.size());
                segs.push_back({a, b});
            };
            switch (code) {
                case 1: emit(B, L); break;
                case 2: emit(R, B); break;
                case 4: emit(T, R); break;
                case 8: emit(L, T); break;
                case 3: emit(R, L); break;
                case 6: emit(T, B); break;
                case 12: emit(L, R); break;
                case 9: emit(B, T); break;
                case 7: emit(T, L); break;
                case 14: emit(L, B); break;
                case 13: emit(B, R); break;
                case 11: emit(R, T); break;
                case 5:
                    if (0.25 * (v00 + v10 + v11 + v01) > t) {
                        emit(B, R);
                        emit(T, L);
                    } else {
                        emit(B, L);
                        emit(T, R);
                    }
                    break;
                case 10:
                    if (0.25 * (v00 + v10 + v11 + v01) > t) {
                        emit(L, B);
                        emit(R, T);
                    } else {
                        emit(R, B);
                        emit(L, T);
                    }
                    break;
                default: break;
            }
        }

    std::vector<Polyline> loops;
    std::vector<std::uint8_t> used(segs.size(), 0);
    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
        if (used[s0]) continue;
        Polyline loop;
        std::size_t s = s0;
        while (!used[s]) {
            used[s] = 1;
            loop.pts.push_back(edge_point(dom, f, segs[s].from, t));
            auto it = by_from.find(segs[s].to);
            if (it == by_from.end())
                throw certificate_error("level_curves: level curve failed to close");
            s = it->second;
        }
        if (s != s0) throw certificate_error("level_curves: level curve failed to close");
        if (loop.pts.size() >= 3) loops.push_back(std::move(loop));
    }
    return loops;
}

double polyline_area(const Polyline& loop) {
    double acc = 0.0;
    const std::size_t m = loop.pts.size();
    for (std::size_t k = 0; k < m; ++k) {
        const auto& a = loop.pts[k];
        const auto& b = loop.pts[(k + 1) % m];
        acc += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * acc;
}

// ============================================================
// superlevel quantities from the loops
// ============================================================

double grid_level_volume(const PlanarGreen& pg, double t) {
    double acc = 0.0;
    for (const Polyline& loop : level_curves(pg, t)) acc += polyline_area(loop);
    return acc;
}

double grid_level_weighted_volume(const PlanarGreen& pg, double t, double beta) {
    double acc = 0.0;
    for (const Polyline& loop : level_curves(pg, t)) {
        Polygon poly;
        poly.pts.reserve(loop.pts.size());
        for (const auto& p : loop.pts) poly.pts.push_back({p[0] - pg.dom.px, p[1] - pg.dom.py});
        acc += polygon_weighted_area(poly, beta);
    }
    return acc;
}

double grid_level_surface_integral(const PlanarGreen& pg, double t, double beta, double pw) {
    double acc = 0.0;
    for (const Polyline& loop : level_curves(pg, t)) {
        const std::size_t m = loop.pts.size();
        for (std::size_t k = 0; k < m; ++k) {
            const auto& a = loop.pts[k];
            const auto& b = loop.pts[(k + 1) % m];
            const double mx = 0.5 * (a[0] + b[0]), my = 0.5 * (a[1] + b[1]);
            const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
            if (!(len > 0.0)) continue;
            const auto gr = pg.gradient(mx, my);
            const double gn = std::hypot(gr[0], gr[1]);
            const double rw = std::hypot(mx - pg.dom.px, my - pg.dom.py);
            acc += std::pow(rw, -beta) * std::pow(gn, pw) * len;
        }
    }
    return acc;
}

}  // namespace smt

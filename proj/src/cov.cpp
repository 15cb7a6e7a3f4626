#include "paplang/cov.hpp"

#include <algorithm>
#include <cmath>

#include "paplang/eval.hpp"
#include "paplang/typecheck.hpp"

namespace paplang {

namespace {

constexpr double kSingularDet = 1e-300;
constexpr int kScanGrid = 4096;
constexpr double kBisectTol = 1e-12;

double absDet(std::vector<std::vector<double>> m) {
    const int n = (int)m.size();
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        if (m[piv][c] == 0.0) return 0.0;
        std::swap(m[piv], m[c]);
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            double k = m[r][c] / m[c][c];
            for (int j = c; j < n; ++j) m[r][j] -= k * m[c][j];
        }
    }
    return std::fabs(det);
}

// Evaluates the outputs of a piece at a scalar input.
std::optional<std::vector<double>> pieceAt(const Piece& p, double x) {
    std::vector<double> xs{x};
    std::vector<double> out;
    for (const auto& f : p.fn) {
        auto v = exEval(f, xs);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    return out;
}

// Roots of fn(x) - y on [lo, hi] restricted to the piece's analytic set,
// found by grid scan plus bisection.
std::vector<double> pieceRoots1D(const Piece& p, double y, double lo, double hi) {
    std::vector<double> roots;
    double prevX = lo;
    auto prev = pieceAt(p, lo);
    for (int i = 1; i <= kScanGrid; ++i) {
        double x = lo + (hi - lo) * i / kScanGrid;
        auto cur = pieceAt(p, x);
        if (prev && cur) {
            double ra = (*prev)[0] - y, rb = (*cur)[0] - y;
            if (ra == 0.0 && contains(p.set, {prevX}) == Tri::True) roots.push_back(prevX);
            if (ra * rb < 0.0) {
                double a = prevX, b = x, fa = ra;
                for (int it = 0; it < 200 && b - a > kBisectTol; ++it) {
                    double m = 0.5 * (a + b);
                    auto fmv = pieceAt(p, m);
                    if (!fmv) break;
                    double fm = (*fmv)[0] - y;
                    if (fa * fm <= 0.0) {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                double r = 0.5 * (a + b);
                if (contains(p.set, {r}) == Tri::True) roots.push_back(r);
            }
        }
        prevX = x;
        prev = cur;
    }
    // deduplicate nearby roots
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return std::fabs(a - b) < 10 * kBisectTol * std::max(1.0, std::fabs(a)); }),
                roots.end());
    return roots;
}

std::optional<double> evalScalarFn(const TermPtr& t, const TyPtr& argTy,
                                   const std::vector<double>& x, long fuel) {
    auto out = evalFlat(t, argTy, x, fuel);
    if (!out || out->size() != 1) return std::nullopt;
    return (*out)[0];
}

double pieceJacAbsDet(const IntensionalDeriv& d, size_t pieceIdx,
                      const std::vector<double>& x, JacobianSource src) {
    const int n = d.rep.inDim;
    std::vector<std::vector<double>> jac(d.rep.outDim, std::vector<double>(n, 0.0));
    if (src == JacobianSource::Intensional) {
        for (int r = 0; r < d.rep.outDim; ++r)
            for (int c = 0; c < n; ++c) {
                auto v = exEval(d.pieceJacobians[pieceIdx][r][c], x);
                if (!v) throw CovError("intensional Jacobian undefined at the preimage");
                jac[r][c] = *v;
            }
    } else {
        // central differences of the analytic piece itself
        for (int c = 0; c < n; ++c) {
            double h = fdStep(x[c]);
            std::vector<double> xp = x, xm = x;
            xp[c] += h;
            xm[c] -= h;
            for (int r = 0; r < d.rep.outDim; ++r) {
                auto fp = exEval(d.rep.pieces[pieceIdx].fn[r], xp);
                auto fm = exEval(d.rep.pieces[pieceIdx].fn[r], xm);
                if (!fp || !fm) throw CovError("piece undefined at a stencil point");
                jac[r][c] = (*fp - *fm) / (2.0 * h);
            }
        }
    }
    return absDet(std::move(jac));
}

struct BoxHit {
    size_t piece;
    std::vector<double> x;
};

std::vector<BoxHit> boxPreimages(const DensityQuery& q, const LebesgueBox& box) {
    const int n = (int)box.lo.size();
    std::vector<BoxHit> hits;
    if (q.inverse) {
        TyPtr invTy = infer(q.inverse);
        auto x = evalFlat(q.inverse, invTy->a, q.y, q.fuel);
        if (!x) return hits;
        for (int c = 0; c < n; ++c)
            if ((*x)[c] < box.lo[c] || (*x)[c] > box.hi[c]) return hits;
        for (size_t i = 0; i < q.rep.rep.pieces.size(); ++i)
            if (contains(q.rep.rep.pieces[i].set, *x) == Tri::True) hits.push_back({i, *x});
        return hits;
    }
    if (n != 1)
        throw CovError("without an inverse term, only 1-D pushforwards are supported");
    for (size_t i = 0; i < q.rep.rep.pieces.size(); ++i) {
        for (double r : pieceRoots1D(q.rep.rep.pieces[i], q.y[0], box.lo[0], box.hi[0]))
            hits.push_back({i, {r}});
    }
    return hits;
}

} // namespace

std::optional<double> pushforwardDensity(const DensityQuery& q, JacobianSource src) {
    if (const auto* box = std::get_if<LebesgueBox>(&q.mu)) {
        TyPtr rhoTy = infer(box->density);
        auto hits = boxPreimages(q, *box);
        if (hits.empty()) return std::nullopt;
        double total = 0.0;
        for (const auto& hit : hits) {
            auto rho = evalScalarFn(box->density, rhoTy->a, hit.x, q.fuel);
            if (!rho) throw CovError("base density undefined at the preimage");
            double det = pieceJacAbsDet(q.rep, hit.piece, hit.x, src);
            if (det < kSingularDet) throw CovError("singular Jacobian");
            total += *rho / det;
        }
        return total;
    }

    const auto& chart = std::get<Chart>(q.mu);
    // pieces of f . gamma over the chart parameter
    PiecewiseRep gammaRep = extractRep(chart.gamma, 8);
    IntensionalDeriv fg = intensionalDeriv(composeReps(gammaRep, q.rep.rep));
    const int n = fg.rep.outDim;

    if (n == 1) {
        double total = 0.0;
        bool found = false;
        for (size_t i = 0; i < fg.rep.pieces.size(); ++i) {
            for (double t : pieceRoots1D(fg.rep.pieces[i], q.y[0], chart.tlo, chart.thi)) {
                auto rho = evalScalarFn(chart.paramDensity, tyReal(), {t}, q.fuel);
                if (!rho) throw CovError("parameter density undefined");
                auto dv = exEval(fg.pieceJacobians[i][0][0], {t});
                if (!dv) throw CovError("chart derivative undefined");
                if (std::fabs(*dv) < kSingularDet) throw CovError("singular chart derivative");
                total += *rho / std::fabs(*dv);
                found = true;
            }
        }
        if (!found) return std::nullopt;
        return total;
    }

    // n > 1: locate t minimizing ||f(gamma(t)) - y|| on a grid, refine locally,
    // and return paramDensity(t) / ||d(f.gamma)/dt||, a density along the
    // image curve's arc length.
    auto residual = [&](double t) -> std::optional<double> {
        auto v = pwEval(fg.rep, {t});
        if (!v) return std::nullopt;
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += ((*v)[c] - q.y[c]) * ((*v)[c] - q.y[c]);
        return std::sqrt(s);
    };
    double best = chart.tlo, bestR = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScanGrid; ++i) {
        double t = chart.tlo + (chart.thi - chart.tlo) * i / kScanGrid;
        auto r = residual(t);
        if (r && *r < bestR) {
            bestR = *r;
            best = t;
        }
    }
    double step = (chart.thi - chart.tlo) / kScanGrid;
    for (int it = 0; it < 60; ++it) {
        for (double cand : {best - step, best + step}) {
            auto r = residual(cand);
            if (r && *r < bestR) {
                bestR = *r;
                best = cand;
            }
        }
        step *= 0.5;
    }
    double scale = 1.0;
    for (double yc : q.y) scale = std::max(scale, std::fabs(yc));
    if (bestR > 1e-8 * scale) return std::nullopt;

    size_t active = fg.rep.pieces.size();
    for (size_t i = 0; i < fg.rep.pieces.size(); ++i)
        if (contains(fg.rep.pieces[i].set, {best}) == Tri::True) active = i;
    if (active == fg.rep.pieces.size()) return std::nullopt;
    double norm = 0.0;
    for (int r = 0; r < n; ++r) {
        auto dv = exEval(fg.pieceJacobians[active][r][0], {best});
        if (!dv) throw CovError("chart derivative undefined");
        norm += *dv * *dv;
    }
    norm = std::sqrt(norm);
    if (norm < kSingularDet) throw CovError("singular chart derivative");
    auto rho = evalScalarFn(chart.paramDensity, tyReal(), {best}, q.fuel);
    if (!rho) throw CovError("parameter density undefined");
    return *rho / norm;
}

McReport mcVerify(const DensityQuery& q, int samples, int bins, std::mt19937_64& rng) {
    std::vector<double> ys;
    std::vector<double> ws;
    ys.reserve(samples);
    ws.reserve(samples);

    TyPtr fTy = infer(q.f);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    if (const auto* box = std::get_if<LebesgueBox>(&q.mu)) {
        if (box->lo.size() != 1)
            throw CovError("mcVerify supports 1-D pushforwards only");
        TyPtr rhoTy = infer(box->density);
        double vol = box->hi[0] - box->lo[0];
        for (int s = 0; s < samples; ++s) {
            double x = box->lo[0] + vol * unit(rng);
            auto rho = evalScalarFn(box->density, rhoTy->a, {x}, q.fuel);
            auto y = evalFlat(q.f, fTy->a, {x}, q.fuel);
            if (!rho || !y || y->size() != 1) continue;
            ys.push_back((*y)[0]);
            ws.push_back(*rho * vol / samples);
        }
    } else {
        const auto& chart = std::get<Chart>(q.mu);
        TyPtr gTy = infer(chart.gamma);
        double vol = chart.thi - chart.tlo;
        for (int s = 0; s < samples; ++s) {
            double t = chart.tlo + vol * unit(rng);
            auto rho = evalScalarFn(chart.paramDensity, tyReal(), {t}, q.fuel);
            auto g = evalFlat(chart.gamma, gTy->a, {t}, q.fuel);
            if (!rho || !g) continue;
            auto y = evalFlat(q.f, fTy->a, *g, q.fuel);
            if (!y || y->size() != 1) continue;
            ys.push_back((*y)[0]);
            ws.push_back(*rho * vol / samples);
        }
    }
    if (ys.empty()) throw CovError("no pushforward samples were produced");

    auto [mnIt, mxIt] = std::minmax_element(ys.begin(), ys.end());
    double mid = 0.5 * (*mnIt + *mxIt);
    double half = 0.5 * (*mxIt - *mnIt) * 1.05 + 1e-12;
    double lo = mid - half, hi = mid + half;
    double width = (hi - lo) / bins;

    McReport rep;
    rep.empirical.assign(bins, 0.0);
    rep.predicted.assign(bins, 0.0);
    for (int b = 0; b < bins; ++b) rep.binLo.push_back(lo + b * width);
    for (size_t i = 0; i < ys.size(); ++i) {
        int b = std::min(bins - 1, std::max(0, (int)((ys[i] - lo) / width)));
        rep.empirical[b] += ws[i];
    }
    // composite midpoint rule, 8 subintervals per bin
    const int sub = 8;
    for (int b = 0; b < bins; ++b) {
        double mass = 0.0;
        for (int s = 0; s < sub; ++s) {
            double y = lo + b * width + (s + 0.5) * width / sub;
            DensityQuery qq = q;
            qq.y = {y};
            std::optional<double> dens;
            try {
                dens = pushforwardDensity(qq);
            } catch (const CovError&) {
                dens = std::nullopt; // singular/undefined midpoints contribute nothing
            }
            if (dens) mass += *dens * width / sub;
        }
        rep.predicted[b] = mass;
    }
    double tv = 0.0;
    for (int b = 0; b < bins; ++b) tv += std::fabs(rep.empirical[b] - rep.predicted[b]);
    rep.tvDistance = 0.5 * tv;
    return rep;
}

} // namespace paplang

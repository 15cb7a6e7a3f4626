#include "paplang/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "paplang/ad.hpp"
#include "paplang/cov.hpp"
#include "paplang/eval.hpp"
#include "paplang/oracle.hpp"
#include "paplang/ppl.hpp"
#include "paplang/typecheck.hpp"

namespace paplang {

bool CorpusEntry::hasTag(const std::string& t) const {
    return std::find(tags.begin(), tags.end(), t) != tags.end();
}

std::string defaultCorpusDir() {
    if (const char* env = std::getenv("PAPLANG_CORPUS")) return env;
#ifdef PAPLANG_CORPUS_DIR
    return PAPLANG_CORPUS_DIR;
#else
    return "corpus";
#endif
}

std::vector<CorpusEntry> loadCorpus(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw std::runtime_error("cannot open " + dir + "/manifest.json");
    nlohmann::json m = nlohmann::json::parse(in);

    std::vector<CorpusEntry> out;
    for (const auto& j : m.at("programs")) {
        CorpusEntry e;
        e.file = j.at("file").get<std::string>();
        e.tyText = j.at("type").get<std::string>();
        for (const auto& t : j.at("tags")) e.tags.push_back(t.get<std::string>());
        e.lo = j.at("domain")[0].get<double>();
        e.hi = j.at("domain")[1].get<double>();
        e.unrollBudget = j.at("unrollBudget").get<int>();
        e.oracle = j.at("oracle").get<bool>();
        if (j.contains("adFailurePoints"))
            for (const auto& p : j["adFailurePoints"]) e.adFailurePoints.push_back(p.get<double>());
        e.prog = parseFile(dir + "/" + e.file);
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

constexpr long kSweepMaxFuel = 1024;

bool bitEqual(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::vector<double> randPoint(int dim, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> x(dim);
    for (auto& v : x) v = d(rng);
    return x;
}

const CorpusEntry* findEntry(const std::vector<CorpusEntry>& corpus, const std::string& file) {
    for (const auto& e : corpus)
        if (e.file == file) return &e;
    return nullptr;
}

Outcome dualRun(const TermPtr& dt, const TyPtr& argTy, const std::vector<double>& x,
                const std::vector<double>& dir, long fuel) {
    Outcome f = eval(dt, nullptr, fuel);
    if (!f.halted()) return f;
    return applyValue(f.value, unflattenDual(argTy, x, dir), fuel);
}

// Criteria 1 and 2 share one sweep; criterion 11 reuses the halting fuels.
void sweepCriteria(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                   CriterionResult& c1, CriterionResult& c2, CriterionResult& c11) {
    long long checked = 0, halts = 0, monoChecked = 0;
    for (const auto& e : corpus) {
        if (e.probabilistic()) continue;
        const TermPtr& t = e.prog.term;
        TyPtr ty = infer(t);
        int dim = tyFlatDim(ty->a);
        TermPtr dt = adTransform(t);
        std::vector<double> dir(dim, 1.0);

        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 100; ++i) pts.push_back(randPoint(dim, e.lo, e.hi, rng));

        for (const auto& x : pts) {
            long firstHalt = -1;
            std::vector<double> firstVal;
            for (long fuel = 1; fuel <= kSweepMaxFuel; fuel *= 2) {
                Outcome po;
                auto pv = evalFlat(t, ty->a, x, fuel, &po);
                Outcome dv = dualRun(dt, ty->a, x, dir, fuel);
                ++checked;
                if (po.kind != dv.kind) {
                    c1.pass = false;
                    std::ostringstream os;
                    os << e.file << " fuel " << fuel << ": primal/dual outcome kinds differ";
                    if (c1.detail.empty()) c1.detail = os.str();
                }
                if (po.halted() && dv.halted()) {
                    ++halts;
                    std::vector<double> dp, dtan;
                    splitDual(ty->b, dv.value, dp, dtan);
                    if (!bitEqual(*pv, dp)) {
                        c2.pass = false;
                        if (c2.detail.empty())
                            c2.detail = e.file + ": dual primal component not bitwise equal";
                    }
                    if (firstHalt < 0) {
                        firstHalt = fuel;
                        firstVal = *pv;
                    }
                }
            }
            if (firstHalt >= 0) {
                for (long fuel : {firstHalt + 1, firstHalt + 17, firstHalt * 2}) {
                    auto pv = evalFlat(t, ty->a, x, fuel);
                    ++monoChecked;
                    if (!pv || !bitEqual(*pv, firstVal)) {
                        c11.pass = false;
                        if (c11.detail.empty())
                            c11.detail = e.file + ": Halt value changed with more fuel";
                    }
                }
            }
        }
    }
    std::ostringstream s1, s11;
    s1 << checked << " program/fuel/point runs compared";
    if (c1.pass) c1.detail = s1.str();
    if (c2.pass) c2.detail = std::to_string(halts) + " halting runs compared bitwise";
    s11 << monoChecked << " higher-fuel re-runs stable";
    if (c11.pass) c11.detail = s11.str();
}

void aeCriterion(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                 CriterionResult& c3) {
    int programs = 0;
    for (const auto& e : corpus) {
        if (e.probabilistic() || !e.hasTag("total")) continue;
        const TermPtr& t = e.prog.term;
        int dim = tyFlatDim(infer(t)->a);
        double lo = e.lo, hi = e.hi;
        Sampler s = [dim, lo, hi](std::mt19937_64& g) { return randPoint(dim, lo, hi, g); };
        AeReport r = aeCheck(t, s, 1000, kAeTol, rng, e.unrollBudget, 2048);
        ++programs;
        if (r.failed > 0 || r.boundary >= 10) {
            c3.pass = false;
            std::ostringstream os;
            os << e.file << ": " << r.failed << " failures, " << r.boundary
               << " boundary points, worst err " << r.worstAbsErr;
            if (c3.detail.empty()) c3.detail = os.str();
        }
    }
    if (c3.pass)
        c3.detail = std::to_string(programs) + " total programs, 1000 points each, tol 1e-4";
}

void measureZeroCriterion(const std::vector<CorpusEntry>& corpus, CriterionResult& c4) {
    const CorpusEntry* e = findEntry(corpus, "identity_branches.pap");
    if (!e) {
        c4.detail = "identity_branches.pap missing";
        return;
    }
    const TermPtr& t = e->prog.term;
    auto ad = derivative(t, {0.0}, {1.0}, 1024);
    auto fd = finiteDiff(t, {0.0});
    IntensionalDeriv d = intensionalDeriv(t, e->unrollBudget);
    bool adZero = ad && ad->tangent.size() == 1 && ad->tangent[0] == 0.0 &&
                  ad->primal[0] == 0.0;
    bool fdOne = fd && std::fabs((*fd)[0][0] - 1.0) <= 1e-6;
    bool flagged = nearBoundary(d, {0.0});
    c4.pass = adZero && fdOne && flagged;
    std::ostringstream os;
    os << "tangent " << (ad ? ad->tangent[0] : NAN) << ", fd "
       << (fd ? (*fd)[0][0] : NAN) << ", boundary-flagged " << (flagged ? "yes" : "no");
    c4.detail = os.str();
}

void oracleCriterion(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                     CriterionResult& c5) {
    int programs = 0;
    for (const auto& e : corpus) {
        if (e.probabilistic() || !e.oracle) continue;
        const TermPtr& t = e.prog.term;
        TyPtr ty = infer(t);
        int dim = tyFlatDim(ty->a);
        IntensionalDeriv d = intensionalDeriv(t, e.unrollBudget);
        std::uniform_real_distribution<double> dd(-1.0, 1.0);

        int accepted = 0, attempts = 0;
        while (accepted < 500 && attempts < 20000) {
            ++attempts;
            auto x = randPoint(dim, e.lo, e.hi, rng);
            if (nearBoundary(d, x)) continue;
            auto J = intensionalJacobian(d, x);
            if (!J) continue;
            std::vector<double> dir(dim);
            for (auto& v : dir) v = dd(rng);
            auto ad = derivative(t, x, dir, 2048);
            if (!ad) continue;
            bool ok = true;
            for (size_t r = 0; r < J->size(); ++r) {
                double want = 0.0;
                for (int c = 0; c < dim; ++c) want += (*J)[r][c] * dir[c];
                if (std::fabs(ad->tangent[r] - want) > 1e-9 * std::max(1.0, std::fabs(want)))
                    ok = false;
            }
            if (!ok) {
                c5.pass = false;
                if (c5.detail.empty())
                    c5.detail = e.file + ": AD tangent disagrees with the piecewise Jacobian";
            }
            ++accepted;
        }
        ++programs;
        if (accepted < 500) {
            c5.pass = false;
            if (c5.detail.empty())
                c5.detail = e.file + ": only " + std::to_string(accepted) +
                            " usable points out of 500";
        }
    }
    if (c5.pass)
        c5.detail = std::to_string(programs) + " programs, 500 points each, rel tol 1e-9";
}

void cantorCriterion(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                     CriterionResult& c6) {
    const CorpusEntry* e = findEntry(corpus, "cantor.pap");
    if (!e) {
        c6.detail = "cantor.pap missing";
        return;
    }
    const TermPtr& t = e->prog.term;
    TyPtr ty = infer(t);
    c6.pass = true;
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int i = 0; i < 100 && c6.pass; ++i) {
        double x = d(rng);
        auto v = evalFlat(t, ty->a, {x}, 200);
        if (!v || std::fabs((*v)[0] - x * x) > 1e-12) {
            c6.pass = false;
            c6.detail = "did not return x^2 within fuel 200 at x = " + std::to_string(x);
        }
    }
    for (double x : {0.25, 0.75, 1.0 / 13.0}) {
        for (long fuel : {1L, 10L, 100L, 1000L, 10000L}) {
            Outcome o;
            evalFlat(t, ty->a, {x}, fuel, &o);
            if (o.kind != Outcome::Kind::FuelExhausted) {
                c6.pass = false;
                c6.detail = "expected fuel exhaustion at x = " + std::to_string(x);
            }
        }
    }
    if (c6.pass && c6.detail.empty())
        c6.detail = "x^2 on 100 random points; bottom at 1/4, 3/4, 1/13 through fuel 10000";
}

void densityCriterion(const std::vector<CorpusEntry>& corpus, CriterionResult& c7) {
    const CorpusEntry* g = findEntry(corpus, "prob_gauss.pap");
    const CorpusEntry* c = findEntry(corpus, "prob_const.pap");
    if (!g || !c) {
        c7.detail = "probabilistic corpus entries missing";
        return;
    }
    auto d1 = traceDensity(g->prog.prob, {0.3});
    auto d2 = traceDensity(g->prog.prob, {0.3, 0.4});
    auto d3 = traceDensity(c->prog.prob, {});
    bool ok1 = d1.density && std::fabs(*d1.density - std::exp(-0.09)) <= 1e-12;
    bool ok2 = d2.density && *d2.density == 0.0;
    bool ok3 = d3.density && *d3.density == 1.0;
    c7.pass = ok1 && ok2 && ok3;
    std::ostringstream os;
    os << "[0.3] -> " << (d1.density ? *d1.density : NAN) << ", [0.3,0.4] -> "
       << (d2.density ? *d2.density : NAN) << ", [] -> " << (d3.density ? *d3.density : NAN);
    c7.detail = os.str();
}

void normalizationCriterion(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                            CriterionResult& c8) {
    const CorpusEntry* e = findEntry(corpus, "prob_two.pap");
    if (!e) {
        c8.detail = "prob_two.pap missing";
        return;
    }
    const int n = 100000;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum = 0.0, sumSq = 0.0;
    int valid = 0;
    for (int i = 0; i < n; ++i) {
        Trace tr{u(rng), u(rng)};
        auto d = traceDensity(e->prog.prob, tr);
        if (!d.density) continue;
        ++valid;
        sum += *d.density;
        sumSq += *d.density * *d.density;
    }
    double mean = sum / n;
    double var = std::max(0.0, sumSq / n - mean * mean);
    double se = std::sqrt(var / n);
    c8.pass = valid == n && std::fabs(mean - 1.0) <= std::max(3.0 * se, 1e-12);
    std::ostringstream os;
    os << "mean " << mean << " over " << n << " traces, se " << se;
    c8.detail = os.str();
}

void densityGradCriterion(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                          CriterionResult& c9) {
    const CorpusEntry* e = findEntry(corpus, "prob_gauss.pap");
    if (!e) {
        c9.detail = "prob_gauss.pap missing";
        return;
    }
    c9.pass = true;
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0.0;
    for (int i = 0; i < 1000 && c9.pass; ++i) {
        double t = u(rng);
        auto gr = densityGradient(e->prog.prob, {t});
        if (!gr || gr->size() != 1) {
            c9.pass = false;
            c9.detail = "gradient bottomed at t = " + std::to_string(t);
            break;
        }
        double h = fdStep(t);
        auto dp = traceDensity(e->prog.prob, {t + h});
        auto dm = traceDensity(e->prog.prob, {t - h});
        if (!dp.density || !dm.density) continue;
        double fd = (*dp.density - *dm.density) / (2.0 * h);
        double err = std::fabs((*gr)[0] - fd);
        worst = std::max(worst, err);
        if (err > 1e-4) {
            c9.pass = false;
            c9.detail = "gradient/fd mismatch " + std::to_string(err);
        }
    }
    PiecewiseRep rep = extractRep(densityTerm(e->prog.prob, 1), 8);
    if (rep.pieces.empty() || !rep.unresolved.empty()) {
        c9.pass = false;
        c9.detail = "piecewise extraction of the density term failed";
    }
    if (c9.pass) {
        std::ostringstream os;
        os << "1000 traces, worst gradient err " << worst << "; density term has "
           << rep.pieces.size() << " pieces";
        c9.detail = os.str();
    }
}

void covCriterion(const std::vector<CorpusEntry>& corpus, std::mt19937_64& rng,
                  CriterionResult& c10) {
    const CorpusEntry* pw = findEntry(corpus, "pw_linear.pap");
    const CorpusEntry* id = findEntry(corpus, "identity.pap");
    const CorpusEntry* ib = findEntry(corpus, "identity_branches.pap");
    if (!pw || !id || !ib) {
        c10.detail = "cov corpus entries missing";
        return;
    }
    TermPtr half = parseTerm("lam x : R. 0.5");
    auto query = [&](const CorpusEntry* e, double y) {
        DensityQuery q;
        q.mu = LebesgueBox{{-1.0}, {1.0}, half};
        q.f = e->prog.term;
        q.rep = intensionalDeriv(e->prog.term, e->unrollBudget);
        q.y = {y};
        return q;
    };

    c10.pass = true;
    auto d1 = pushforwardDensity(query(pw, 1.0));
    auto d2 = pushforwardDensity(query(pw, -1.5));
    if (!d1 || std::fabs(*d1 - 0.25) > 1e-12 || !d2 || std::fabs(*d2 - 0.5 / 3.0) > 1e-12) {
        c10.pass = false;
        std::ostringstream os;
        os << "pushforward values " << (d1 ? *d1 : NAN) << ", " << (d2 ? *d2 : NAN)
           << " (want 0.25, 1/6)";
        c10.detail = os.str();
    }

    std::ostringstream tvs;
    for (const CorpusEntry* e : {pw, id, ib}) {
        McReport r = mcVerify(query(e, 0.0), 100000, 50, rng);
        tvs << " " << e->file << " tv " << r.tvDistance;
        if (r.tvDistance >= 0.02) {
            c10.pass = false;
            c10.detail = e->file + ": tv distance " + std::to_string(r.tvDistance);
        }
    }
    if (c10.pass) c10.detail = "densities 0.25 and 1/6 exact;" + tvs.str();
}

} // namespace

std::vector<CriterionResult> runAcceptance(const std::string& corpusDir, std::uint64_t seed) {
    auto corpus = loadCorpus(corpusDir);
    std::mt19937_64 rng(seed);

    CriterionResult c1{"halting-parity", true, ""};
    CriterionResult c2{"primal-preservation", true, ""};
    CriterionResult c3{"ae-derivative-correctness", true, ""};
    CriterionResult c4{"measure-zero-failure", false, ""};
    CriterionResult c5{"jacobian-oracle-agreement", true, ""};
    CriterionResult c6{"cantor-behavior", false, ""};
    CriterionResult c7{"trace-density-values", false, ""};
    CriterionResult c8{"density-normalization", false, ""};
    CriterionResult c9{"density-gradient", false, ""};
    CriterionResult c10{"change-of-variables", false, ""};
    CriterionResult c11{"fuel-monotonicity", true, ""};

    sweepCriteria(corpus, rng, c1, c2, c11);
    aeCriterion(corpus, rng, c3);
    measureZeroCriterion(corpus, c4);
    oracleCriterion(corpus, rng, c5);
    cantorCriterion(corpus, rng, c6);
    densityCriterion(corpus, c7);
    normalizationCriterion(corpus, rng, c8);
    densityGradCriterion(corpus, rng, c9);
    covCriterion(corpus, rng, c10);

    return {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
}

} // namespace paplang

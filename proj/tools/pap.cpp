// pap: command-line front end for the paplang interpreter, AD macro,
// piecewise oracle, trace densities, and change-of-variables queries.
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/resource.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "paplang/acceptance.hpp"
#include "paplang/ad.hpp"
#include "paplang/cov.hpp"
#include "paplang/eval.hpp"
#include "paplang/oracle.hpp"
#include "paplang/ppl.hpp"
#include "paplang/typecheck.hpp"

using namespace paplang;
using nlohmann::json;

namespace {

long defaultFuel() {
    if (const char* s = std::getenv("PAPLANG_FUEL_DEFAULT")) return std::strtol(s, nullptr, 10);
    return 1024;
}

std::vector<double> parseDoubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

std::string outcomeText(const Outcome& o) {
    switch (o.kind) {
    case Outcome::Kind::Halt:
        return "Halt " + valueToString(o.value);
    case Outcome::Kind::FuelExhausted:
        return "Bottom (fuel exhausted)";
    case Outcome::Kind::DomainError:
        return "Bottom (domain error: " + o.detail + ")";
    }
    return "";
}

// Uniform box measure from "uniform:LO,HI".
LebesgueBox parseMu(const std::string& spec) {
    if (spec.rfind("uniform:", 0) != 0)
        throw CLI::ValidationError("--mu", "expected uniform:LO,HI");
    auto b = parseDoubles(spec.substr(8));
    if (b.size() != 2 || b[1] <= b[0])
        throw CLI::ValidationError("--mu", "expected uniform:LO,HI with LO < HI");
    return LebesgueBox{{b[0]}, {b[1]}, mkLam("x", tyReal(), mkLit(1.0 / (b[1] - b[0])))};
}

int runStatic(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const TypeError& e) {
        std::cerr << "type error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    // deep fuel-exhaustion runs nest one evaluator frame per unfolding
    rlimit rl{};
    if (getrlimit(RLIMIT_STACK, &rl) == 0 && rl.rlim_cur != rl.rlim_max) {
        rl.rlim_cur = rl.rlim_max;
        setrlimit(RLIMIT_STACK, &rl);
    }

    CLI::App app{"piecewise-analytic language toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "PRNG seed for randomized subcommands");

    std::string file, argText, dirText = "1", traceText, muSpec = "uniform:-1,1";
    std::string inverseFile, corpusDir = defaultCorpusDir();
    long fuel = defaultFuel();
    int points = 1000, samples = 100000, bins = 50, budget = 8;
    double tol = kAeTol, at = 0.0;
    bool wantJson = false, wantRep = false, wantGrad = false;

    auto* check = app.add_subcommand("check", "typecheck a .pap file and print its type");
    check->add_option("file", file)->required();

    auto* run = app.add_subcommand("run", "evaluate a .pap file at a point");
    run->add_option("file", file)->required();
    run->add_option("--arg", argText, "comma-separated input coordinates")->required();
    run->add_option("--fuel", fuel);

    auto* diff = app.add_subcommand("diff", "forward-mode derivative at a point");
    diff->add_option("file", file)->required();
    diff->add_option("--at", argText, "comma-separated input coordinates")->required();
    diff->add_option("--dir", dirText, "tangent direction (default all ones)");
    diff->add_option("--fuel", fuel);

    auto* oracle = app.add_subcommand("oracle", "piecewise representation and a.e. check");
    oracle->add_option("file", file)->required();
    oracle->add_option("--points", points);
    oracle->add_option("--tol", tol);
    oracle->add_option("--budget", budget, "mu unroll budget");
    oracle->add_option("--lo", at, "sampling box low end")->default_val(-1.0);
    double sampleHi = 1.0;
    oracle->add_option("--hi", sampleHi, "sampling box high end");
    oracle->add_flag("--rep", wantRep, "print the piecewise representation");
    oracle->add_flag("--json", wantJson);

    auto* density = app.add_subcommand("density", "trace density of a prob program");
    density->add_option("file", file)->required();
    density->add_option("--trace", traceText, "comma-separated trace entries");
    density->add_option("--fuel", fuel);
    density->add_flag("--grad", wantGrad, "also print the density gradient");

    auto* cov = app.add_subcommand("cov", "pushforward density at a point");
    cov->add_option("file", file)->required();
    cov->add_option("--mu", muSpec, "base measure, uniform:LO,HI");
    cov->add_option("--at", at, "output point")->required();
    cov->add_option("--inverse", inverseFile, "optional inverse term file");
    cov->add_option("--budget", budget);
    cov->add_option("--fuel", fuel);

    auto* covVerify = app.add_subcommand("cov-verify", "Monte Carlo pushforward check");
    covVerify->add_option("file", file)->required();
    covVerify->add_option("--mu", muSpec, "base measure, uniform:LO,HI");
    covVerify->add_option("--samples", samples);
    covVerify->add_option("--bins", bins);
    covVerify->add_option("--budget", budget);
    covVerify->add_flag("--json", wantJson);

    auto* corpus = app.add_subcommand("corpus", "run the acceptance suite on the corpus");
    corpus->add_option("--dir", corpusDir, "corpus directory");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        return runStatic([&] {
            Program p = parseFile(file);
            if (p.prob) {
                std::cout << "prob " << tyToString(probValueTy(p.prob)) << "\n";
            } else {
                std::cout << tyToString(infer(p.term)) << "\n";
            }
            return 0;
        });
    }

    if (run->parsed()) {
        return runStatic([&] {
            Program p = parseFile(file);
            if (p.prob) throw std::runtime_error("use `density` for prob programs");
            TyPtr ty = infer(p.term);
            Outcome o;
            evalFlat(p.term, ty->a, parseDoubles(argText), fuel, &o);
            std::cout << outcomeText(o) << "\n";
            return o.halted() ? 0 : 2;
        });
    }

    if (diff->parsed()) {
        return runStatic([&] {
            Program p = parseFile(file);
            TyPtr ty = infer(p.term);
            auto x = parseDoubles(argText);
            auto dir = dirText == "1" ? std::vector<double>(x.size(), 1.0)
                                      : parseDoubles(dirText);
            Outcome o;
            auto r = derivative(p.term, x, dir, fuel, &o);
            if (!r) {
                std::cout << outcomeText(o) << "\n";
                return 2;
            }
            json j{{"primal", r->primal}, {"tangent", r->tangent}};
            std::cout << j.dump() << "\n";
            return 0;
        });
    }

    if (oracle->parsed()) {
        return runStatic([&] {
            Program p = parseFile(file);
            TyPtr ty = infer(p.term);
            int dim = tyFlatDim(ty->a);
            if (wantRep) {
                PiecewiseRep rep = extractRep(p.term, budget);
                for (size_t i = 0; i < rep.pieces.size(); ++i) {
                    const Piece& pc = rep.pieces[i];
                    std::cout << "piece " << i << ":";
                    for (const auto& g : pc.set.strictGuards)
                        std::cout << " [" << exToString(g) << " > 0]";
                    for (const auto& g : pc.set.nonstrictGuards)
                        std::cout << " [" << exToString(g) << " <= 0]";
                    std::cout << " ->";
                    for (const auto& f : pc.fn) std::cout << " " << exToString(f);
                    std::cout << "\n";
                }
                std::cout << rep.unresolved.size() << " unresolved region(s)\n";
                return 0;
            }
            double lo = at, hi = sampleHi;
            std::mt19937_64 rng(seed);
            Sampler s = [dim, lo, hi](std::mt19937_64& g) {
                std::uniform_real_distribution<double> d(lo, hi);
                std::vector<double> x(dim);
                for (auto& v : x) v = d(g);
                return x;
            };
            AeReport r = aeCheck(p.term, s, points, tol, rng, budget, fuel);
            json j{{"passed", r.passed},
                   {"failed", r.failed},
                   {"boundary", r.boundary},
                   {"worst_abs_err", r.worstAbsErr}};
            std::cout << j.dump() << "\n";
            return r.failed == 0 ? 0 : 3;
        });
    }

    if (density->parsed()) {
        return runStatic([&] {
            Program p = parseFile(file);
            if (!p.prob) throw std::runtime_error("not a prob program");
            Trace tr = parseDoubles(traceText);
            DensityResult r = traceDensity(p.prob, tr, fuel);
            if (!r.density) {
                std::cout << outcomeText(r.outcome) << "\n";
                return 2;
            }
            std::cout << "density " << *r.density << "\n";
            if (wantGrad) {
                auto g = densityGradient(p.prob, tr, fuel);
                if (!g) {
                    std::cout << "gradient bottomed\n";
                    return 2;
                }
                std::cout << "gradient " << json(*g).dump() << "\n";
            }
            return 0;
        });
    }

    if (cov->parsed() || covVerify->parsed()) {
        return runStatic([&] {
            Program p = parseFile(file);
            DensityQuery q;
            q.mu = parseMu(muSpec);
            q.f = p.term;
            q.rep = intensionalDeriv(p.term, budget);
            q.fuel = fuel;
            if (!inverseFile.empty()) q.inverse = parseFile(inverseFile).term;
            if (cov->parsed()) {
                q.y = {at};
                auto d = pushforwardDensity(q);
                if (!d) {
                    std::cout << "off support\n";
                    return 2;
                }
                std::cout << "density " << *d << "\n";
                return 0;
            }
            std::mt19937_64 rng(seed);
            McReport r = mcVerify(q, samples, bins, rng);
            if (wantJson) {
                json j{{"tv_distance", r.tvDistance},
                       {"bin_lo", r.binLo},
                       {"empirical", r.empirical},
                       {"predicted", r.predicted}};
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "tv_distance " << r.tvDistance << "\n";
            }
            return 0;
        });
    }

    // corpus
    return runStatic([&] {
        int failures = 0;
        for (const auto& r : runAcceptance(corpusDir, seed)) {
            std::printf("%-28s %s  (%s)\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.detail.c_str());
            if (!r.pass) ++failures;
        }
        return failures == 0 ? 0 : 3;
    });
}

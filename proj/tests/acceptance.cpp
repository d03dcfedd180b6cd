// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line
// with its measured tolerance and runtime; the exit code is the number of
// failures. The first argument is the path to the mmnorm binary, used by the
// CLI determinism check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mmnorm/coverage.hpp"
#include "mmnorm/csv.hpp"
#include "mmnorm/mcsim.hpp"
#include "mmnorm/netmodel.hpp"
#include "mmnorm/normalize.hpp"
#include "mmnorm/rng.hpp"
#include "mmnorm/sweep.hpp"

using namespace mmnorm;
using mmnorm::testing::derived_network;
using mmnorm::testing::manhattan_network;

namespace {

int failures = 0;
std::string mmnorm_binary;

void report(int id, const char* name, bool ok, double seconds,
            const std::string& detail) {
    std::printf("%s  c%d %-28s  (%6.2f s)  %s\n", ok ? "PASS" : "FAIL", id,
                name, seconds, detail.c_str());
    if (!ok) ++failures;
}

void run_check(int id, const char* name,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report(id, name, ok, seconds, detail);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

long double erf_series(long double z) {
    long double term = z;
    long double sum = z;
    for (int n = 1; n < 300; ++n) {
        term *= -z * z / static_cast<long double>(n);
        const long double add = term / static_cast<long double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-24L * std::abs(sum)) break;
    }
    return sum * 2.0L / std::sqrt(3.141592653589793238462643383279503L);
}

double closed_branch_alpha2(const PiecewiseDensity& prof, double decay,
                            PdfMode mode) {
    const std::vector<double>& bp = prof.breakpoints();
    const std::vector<double>& vals = prof.values();
    const long double pi_l = 3.141592653589793238462643383279503L;
    long double total = 0.0L;
    long double left = 0.0L;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const bool tail = i == bp.size();
        const long double right = tail ? 0.0L : static_cast<long double>(bp[i]);
        const long double v = vals[i];
        if (v == 0.0L) {
            left = right;
            continue;
        }
        const long double lam =
            mode == PdfMode::PaperLiteral
                ? v
                : static_cast<long double>(prof.prefactor()) * v;
        const long double k = pi_l * lam + static_cast<long double>(decay);
        long double offset = 0.0L;
        if (mode == PdfMode::Rigorous)
            offset = static_cast<long double>(
                         prof.cumulative_intensity(static_cast<double>(left))) -
                     pi_l * lam * left * left;
        const long double upper = tail ? 0.0L : std::exp(-k * right * right);
        total += (pi_l * lam / k) * std::exp(-offset) *
                 (std::exp(-k * left * left) - upper);
        left = right;
    }
    if (mode == PdfMode::PaperLiteral)
        total *= static_cast<long double>(prof.prefactor());
    return static_cast<double>(total);
}

bool check_conservation(std::string& detail) {
    Rng rng(1, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double beamwidth = 1e-3 + rng.uniform() * (kTwoPi - 2e-3);
        const double sidelobe = rng.uniform() * 0.999;
        const GainPair g = main_lobe_gain(beamwidth, sidelobe);
        const double radiated =
            beamwidth * g.main_gain + (kTwoPi - beamwidth) * g.side_gain;
        worst = std::max(worst, std::abs(radiated - kTwoPi));
    }
    detail = "max |radiated - 2pi| = " + fmt(worst);
    return worst <= 1e-12;
}

bool near_rel(double got, double want, double rel) {
    if (want == 0.0) return std::abs(got) <= 1e-12;
    return std::abs(got - want) <= rel * std::abs(want);
}

bool check_profiles(std::string& detail) {
    const NetworkConfig cfg = manhattan_network();
    const PiecewiseDensity los = build_los_profile(cfg, 1);
    const NlosProfiles nlos = build_nlos_profiles(cfg);

    bool ok = true;
    const std::vector<double> los_bp{8.9443, 20.0};
    const std::vector<double> los_vals{1.5, 0.5, 0.0};
    ok = ok && los.breakpoints().size() == 2 && los.values().size() == 3;
    for (std::size_t i = 0; ok && i < 2; ++i)
        ok = near_rel(los.breakpoints()[i], los_bp[i], 1e-3);
    for (std::size_t i = 0; ok && i < 3; ++i)
        ok = near_rel(los.values()[i], los_vals[i], 1e-3);

    const std::vector<double> nlos_bp{133.748, 200.0};
    const std::vector<double> inner_vals{9.4721e-3, 5e-3, 0.0};
    const std::vector<double> outer_vals{0.0, 4.4721e-3, 9.4721e-3};
    ok = ok && nlos.inner.breakpoints().size() == 2 &&
         nlos.outer.breakpoints().size() == 2;
    for (std::size_t i = 0; ok && i < 2; ++i) {
        ok = near_rel(nlos.inner.breakpoints()[i], nlos_bp[i], 1e-3) &&
             near_rel(nlos.outer.breakpoints()[i], nlos_bp[i], 1e-3);
    }
    for (std::size_t i = 0; ok && i < 3; ++i) {
        ok = near_rel(nlos.inner.values()[i], inner_vals[i], 1e-3) &&
             near_rel(nlos.outer.values()[i], outer_vals[i], 1e-3);
    }
    if (!ok) {
        detail = "profile fixtures off";
        return false;
    }

    // inner and outer segment densities always add up to the full stack
    const double total = nlos.inner.values()[0];
    Rng rng(2, 0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double r = rng.uniform() * 400.0;
        const double sum = nlos.inner.density_at(r) + nlos.outer.density_at(r);
        worst = std::max(worst, std::abs(sum - total));
    }
    detail = "fixtures ok; max |inner+outer-total| = " + fmt(worst);
    return worst <= 1e-12;
}

bool check_alignment_weights(std::string& detail) {
    const NetworkConfig cfg = manhattan_network();
    const AlignmentDistribution d = alignment_distribution(
        deg_to_rad(20.0), deg_to_rad(4.0),
        directivity_levels(cfg.bs_pattern, cfg.ue_pattern));
    const long double q =
        erf_series(static_cast<long double>(deg_to_rad(20.0)) /
                   (2.0L * std::sqrt(2.0L) *
                    static_cast<long double>(deg_to_rad(4.0))));
    const long double oracle[4] = {q * q, q * (1.0L - q), (1.0L - q) * q,
                                   (1.0L - q) * (1.0L - q)};
    double worst = 0.0, sum = 0.0;
    for (int j = 0; j < 4; ++j) {
        worst = std::max(
            worst, std::abs(d.weights[static_cast<std::size_t>(j)] -
                            static_cast<double>(oracle[j])));
        sum += d.weights[static_cast<std::size_t>(j)];
    }
    detail = "max |w - oracle| = " + fmt(worst) +
             ", |sum-1| = " + fmt(std::abs(sum - 1.0));
    return worst <= 1e-4 && std::abs(sum - 1.0) <= 1e-12;
}

bool check_quadrature_closed_form(std::string& detail) {
    Rng rng(3, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const PdfMode mode =
            trial % 2 == 0 ? PdfMode::PaperLiteral : PdfMode::Rigorous;
        const int n_break = 1 + static_cast<int>(rng.uniform() * 3.0) % 3;
        std::vector<double> bp;
        double edge = 20.0 + rng.uniform() * 60.0;
        for (int i = 0; i < n_break; ++i) {
            bp.push_back(edge);
            edge += 10.0 + rng.uniform() * 90.0;
        }
        std::vector<double> vals;
        vals.push_back(1e-3 + rng.uniform() * 2.9e-2);
        for (int i = 1; i < n_break; ++i)
            vals.push_back(rng.uniform() < 0.25
                               ? 0.0
                               : 1e-3 + rng.uniform() * 2.9e-2);
        vals.push_back(rng.uniform() < 0.5 ? 0.0
                                           : 1e-3 + rng.uniform() * 8e-3);
        const double prefactor = 0.3 + rng.uniform() * 0.7;
        const PiecewiseDensity prof(bp, vals, prefactor);
        const double decay = kPi * vals[0] * (0.02 + rng.uniform() * 2.0);

        const double got = branch_coverage_integral(prof, 2.0, decay, mode);
        const double want = closed_branch_alpha2(prof, decay, mode);
        if (want <= 0.0) continue;
        worst = std::max(worst, std::abs(got - want) / want);
    }
    detail = "max rel err = " + fmt(worst) + " over 200 profiles";
    return worst <= 1e-9;
}

bool check_mc_oracle(std::string& detail) {
    SimConfig sim;
    sim.network = manhattan_network();
    sim.trials = 1000000;
    sim.seed = 2026;
    sim.threads = 2;

    std::vector<double> thresholds;
    for (int k = 0; k < 20; ++k)
        thresholds.push_back(db_to_linear(-10.0 + 40.0 * k / 19.0));
    const std::vector<McEstimate> est = run_branch_mirror(sim, thresholds);

    int agree = 0;
    double worst_pull = 0.0;
    for (std::size_t m = 0; m < thresholds.size(); ++m) {
        CoverageQuery q;
        q.threshold = thresholds[m];
        q.config = sim.network;
        q.mode = PdfMode::Rigorous;
        q.alignment = Alignment::WithErrors;
        const double analytic = coverage(q).p_cov;
        const double se = est[m].std_error;
        const double pull =
            se > 0.0 ? std::abs(est[m].mean - analytic) / se : 1e9;
        worst_pull = std::max(worst_pull, pull);
        if (pull <= 3.0) ++agree;
    }
    detail = std::to_string(agree) + "/20 within 3 SE, worst pull " +
             fmt(worst_pull);
    return agree >= 19;
}

bool check_alignment_ordering(std::string& detail) {
    std::vector<double> grid_db;
    for (int t = -10; t <= 30; t += 2) grid_db.push_back(t);

    double worst_violation = -1.0;
    for (double t_db : grid_db) {
        CoverageQuery q;
        q.threshold = db_to_linear(t_db);
        q.config = manhattan_network();
        q.mode = PdfMode::PaperLiteral;
        q.alignment = Alignment::WithErrors;
        const double with_errors = coverage(q).p_cov;
        q.alignment = Alignment::Perfect;
        const double perfect = coverage(q).p_cov;
        worst_violation = std::max(worst_violation, with_errors - perfect);
    }
    if (worst_violation > 0.0) {
        detail = "WithErrors exceeded Perfect by " + fmt(worst_violation);
        return false;
    }

    // with no LOS links alignment cannot matter
    CoverageQuery q;
    q.threshold = 1.0;
    q.config = manhattan_network();
    q.config.blockage.los_fraction = 0.0;
    q.mode = PdfMode::PaperLiteral;
    q.alignment = Alignment::WithErrors;
    const double we = coverage(q).p_cov;
    q.alignment = Alignment::Perfect;
    const double pf = coverage(q).p_cov;
    const double gap = std::abs(pf - we);
    if (gap > 1e-12) {
        detail = "alignment gap " + fmt(gap) + " at zero LOS fraction";
        return false;
    }

    double prev = -1.0;
    for (double c : {0.0, 0.117, 1.0}) {
        CoverageQuery lq;
        lq.threshold = 1.0;
        lq.config = manhattan_network();
        lq.config.blockage.los_fraction = c;
        lq.mode = PdfMode::PaperLiteral;
        lq.alignment = Alignment::WithErrors;
        const double p_los = coverage(lq).p_los;
        if (p_los < prev) {
            detail = "p_los not monotone in the LOS fraction";
            return false;
        }
        prev = p_los;
    }
    detail = "ordering, zero-LOS gap " + fmt(gap) + ", monotone p_los";
    return true;
}

bool check_interior_beamwidth_optimum(std::string& detail) {
    const NetworkConfig base = derived_network(deg_to_rad(20.0));
    const double lo = deg_to_rad(5.0), hi = deg_to_rad(60.0);

    const auto eval = [&](double beamwidth, double threshold) {
        CoverageQuery q;
        q.threshold = threshold;
        q.config = base;
        q.config.bs_pattern = q.config.bs_pattern.with_beamwidth(beamwidth);
        q.config.ue_pattern = q.config.ue_pattern.with_beamwidth(beamwidth);
        q.mode = PdfMode::PaperLiteral;
        q.alignment = Alignment::WithErrors;
        return coverage(q).p_cov;
    };

    std::string parts;
    for (double t_db : {0.0, 10.0}) {
        const double threshold = db_to_linear(t_db);
        const BeamwidthOptimum opt =
            optimal_beamwidth(base, threshold, lo, hi);
        const double at_lo = eval(lo, threshold);
        const double at_hi = eval(hi, threshold);
        const double margin =
            opt.coverage_value - std::max(at_lo, at_hi);
        parts += fmt(rad_to_deg(opt.beamwidth)) + " deg margin " +
                 fmt(margin) + "; ";
        if (opt.at_boundary || margin <= 1e-9) {
            detail = "no interior optimum at " + fmt(t_db) + " dB: " + parts;
            return false;
        }
    }
    detail = "interior optima: " + parts;
    return true;
}

bool check_perfect_limit(std::string& detail) {
    double worst = 0.0;
    for (int t = -10; t <= 30; t += 2) {
        CoverageQuery q;
        q.threshold = db_to_linear(t);
        q.config = manhattan_network();
        q.config.steering_sigma = 1e-6;
        q.mode = PdfMode::PaperLiteral;
        q.alignment = Alignment::WithErrors;
        const double nearly = coverage(q).p_cov;
        q.alignment = Alignment::Perfect;
        const double exact = coverage(q).p_cov;
        worst = std::max(worst, std::abs(nearly - exact));
    }
    detail = "max |sigma=1e-6 - perfect| = " + fmt(worst);
    return worst <= 1e-9;
}

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool check_cli_determinism(std::string& detail) {
    if (mmnorm_binary.empty()) {
        detail = "mmnorm binary path not supplied";
        return false;
    }
    const std::string config_path = "acceptance_cli.json";
    {
        std::ofstream out(config_path);
        out << R"json({
  "tiers": [
    {"power_w": 1.0, "density_per_m2": "1/200"},
    {"power_w": 5.0, "density_per_m2": "1/500"}
  ],
  "antenna": {
    "mode": "explicit",
    "beamwidth_deg": 20.0,
    "main_gain_db": 10.0,
    "side_gain_db": -10.0
  },
  "steering_sigma_deg": 4.0,
  "mode": "rigorous",
  "thresholds_db": [-10.0, 0.0, 10.0, 20.0, 30.0],
  "mc": {"trials": 20000, "seed": 5}
})json";
    }

    const auto invoke = [&](const std::string& args, const std::string& out) {
        const std::string cmd = "\"" + mmnorm_binary + "\" --config " +
                                config_path + " --out " + out + " " + args;
        return std::system(cmd.c_str()) == 0;
    };

    if (!invoke("mc --threads 1", "acceptance_mc_a.csv") ||
        !invoke("mc --threads 4", "acceptance_mc_b.csv")) {
        detail = "mc subcommand returned a non-zero exit code";
        return false;
    }
    const auto mc_a = slurp("acceptance_mc_a.csv");
    const auto mc_b = slurp("acceptance_mc_b.csv");
    if (!mc_a || !mc_b || mc_a->empty()) {
        detail = "mc output files missing or empty";
        return false;
    }
    if (*mc_a != *mc_b) {
        detail = "mc output differs between 1 and 4 threads";
        return false;
    }

    if (!invoke("sweep-threshold", "acceptance_sweep_a.csv") ||
        !invoke("sweep-threshold", "acceptance_sweep_b.csv")) {
        detail = "sweep-threshold returned a non-zero exit code";
        return false;
    }
    const auto sw_a = slurp("acceptance_sweep_a.csv");
    const auto sw_b = slurp("acceptance_sweep_b.csv");
    if (!sw_a || !sw_b || sw_a->empty()) {
        detail = "sweep output files missing or empty";
        return false;
    }
    if (*sw_a != *sw_b) {
        detail = "sweep-threshold output differs between runs";
        return false;
    }

    for (const char* f :
         {"acceptance_cli.json", "acceptance_mc_a.csv", "acceptance_mc_b.csv",
          "acceptance_sweep_a.csv", "acceptance_sweep_b.csv"})
        std::remove(f);
    detail = "mc (1 vs 4 threads) and sweep-threshold byte-identical";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) mmnorm_binary = argv[1];

    struct Timed {
        int id;
        const char* name;
        bool (*body)(std::string&);
        double budget_s;  // 0 = no budget
    };
    const Timed checks[] = {
        {1, "power conservation", check_conservation, 1.0},
        {2, "normalized profiles", check_profiles, 0.0},
        {3, "alignment weights", check_alignment_weights, 0.0},
        {4, "quadrature vs closed form", check_quadrature_closed_form, 5.0},
        {5, "monte carlo oracle", check_mc_oracle, 60.0},
        {6, "alignment ordering", check_alignment_ordering, 0.0},
        {7, "interior beamwidth optimum", check_interior_beamwidth_optimum,
         0.0},
        {8, "perfect-alignment limit", check_perfect_limit, 0.0},
        {9, "CLI determinism", check_cli_determinism, 0.0},
    };

    for (const Timed& check : checks) {
        run_check(check.id, check.name, [&](std::string& detail) {
            const auto t0 = std::chrono::steady_clock::now();
            const bool ok = check.body(detail);
            const double seconds = std::chrono::duration<double>(
                                       std::chrono::steady_clock::now() - t0)
                                       .count();
            if (ok && check.budget_s > 0.0 && seconds > check.budget_s) {
                detail += " [exceeded " + fmt(check.budget_s) + " s budget]";
                return false;
            }
            return ok;
        });
    }

    if (failures == 0) std::printf("all acceptance checks passed\n");
    return failures;
}

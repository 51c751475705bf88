#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xyq/analytic_chain.hpp"
#include "xyq/engine.hpp"
#include "xyq/ergodicity.hpp"

namespace xyq {

inline constexpr const char* kVersion = "xyquench 1.0.0";

enum class Quantity { Mz, Txx, Tyy, Tzz, EN };

inline const std::vector<Quantity>& all_quantities() {
    static const std::vector<Quantity> q{Quantity::Mz, Quantity::Txx, Quantity::Tyy,
                                         Quantity::Tzz, Quantity::EN};
    return q;
}

inline std::string to_string(Quantity q) {
    switch (q) {
    case Quantity::Mz: return "m_z";
    case Quantity::Txx: return "t_xx";
    case Quantity::Tyy: return "t_yy";
    case Quantity::Tzz: return "t_zz";
    case Quantity::EN: return "e_n";
    }
    throw std::logic_error("unknown Quantity");
}

inline double quantity_of(const CorrelatorSet& c, const EntanglementValue& e, Quantity q) {
    switch (q) {
    case Quantity::Mz: return c.m_z;
    case Quantity::Txx: return c.t_xx;
    case Quantity::Tyy: return c.t_yy;
    case Quantity::Tzz: return c.t_zz;
    case Quantity::EN: return e.e_n;
    }
    throw std::logic_error("unknown Quantity");
}

/// Geometry selector: the exactly-solved infinite chain or a finite lattice.
struct GeometrySpec {
    bool infinite = true;
    LatticeKind kind = LatticeKind::Chain;
    std::array<int, 2> dims{12, 1};

    std::string label() const {
        if (infinite) return "infinite-chain";
        switch (kind) {
        case LatticeKind::Chain: return "chain-" + std::to_string(dims[0]);
        case LatticeKind::Ladder:
            return "ladder-2x" + std::to_string(dims[1]);
        case LatticeKind::Torus:
            return "torus-" + std::to_string(dims[0]) + "x" + std::to_string(dims[1]);
        }
        throw std::logic_error("unknown kind");
    }

    /// Accepts "infinite", "chain:12", "ladder:2x4", "torus:3x4".
    static GeometrySpec parse(const std::string& text) {
        GeometrySpec g;
        if (text == "infinite" || text == "infinite-chain") return g;
        g.infinite = false;
        const auto colon = text.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad geometry '" + text + "'");
        const std::string kind = text.substr(0, colon), dims = text.substr(colon + 1);
        const auto x = dims.find('x');
        if (kind == "chain") {
            if (x != std::string::npos) throw std::invalid_argument("chain takes one extent");
            g.kind = LatticeKind::Chain;
            g.dims = {std::stoi(dims), 1};
        } else if (kind == "ladder") {
            if (x == std::string::npos) throw std::invalid_argument("ladder needs RxL");
            g.kind = LatticeKind::Ladder;
            g.dims = {std::stoi(dims.substr(0, x)), std::stoi(dims.substr(x + 1))};
        } else if (kind == "torus") {
            if (x == std::string::npos) throw std::invalid_argument("torus needs RxC");
            g.kind = LatticeKind::Torus;
            g.dims = {std::stoi(dims.substr(0, x)), std::stoi(dims.substr(x + 1))};
        } else {
            throw std::invalid_argument("bad geometry kind '" + kind + "'");
        }
        return g;
    }
};

struct BetaGrid {
    double lo = 1e-3;
    double hi = 1e3;
    int count = 49;

    std::vector<double> values() const {
        if (count < 2 || lo <= 0 || hi <= lo)
            throw std::invalid_argument("bad beta grid");
        std::vector<double> v(count);
        for (int k = 0; k < count; ++k)
            v[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
        return v;
    }
};

/// Full configuration of one experiment run.  Defaults reproduce the
/// published setting: gamma = 1/2, J = 1, initial beta_tilde = 20, fields
/// a/J in {0.2, 0.6, 1.2, 2}.
struct ExperimentConfig {
    GeometrySpec geometry;
    double gamma = 0.5;
    double coupling_J = 1.0;
    std::vector<double> fields{0.2, 0.6, 1.2, 2.0};
    double beta_tilde_init = 20.0;
    BetaGrid beta_grid;
    SamplingPlan sampling;
    QuadratureSpec quadrature;
    double band_factor = kDefaultBandFactor;
    double match_tol = kDefaultMatchTol;
    std::string output_dir = "out";

    void validate() const {
        ModelParams(coupling_J, gamma, 0.0);
        if (beta_tilde_init <= 0) throw std::invalid_argument("beta_tilde_init must be > 0");
        if (fields.empty()) throw std::invalid_argument("fields must not be empty");
        quadrature.validate();
        (void)beta_grid.values();
        if (band_factor <= 1) throw std::invalid_argument("band_factor must exceed 1");
        if (match_tol <= 0) throw std::invalid_argument("match_tol must be positive");
    }

    nlohmann::json to_json() const {
        return {{"geometry", geometry.label()},
                {"gamma", gamma},
                {"J", coupling_J},
                {"fields", fields},
                {"beta_tilde_init", beta_tilde_init},
                {"beta_grid", {{"lo", beta_grid.lo}, {"hi", beta_grid.hi}, {"count", beta_grid.count}}},
                {"sampling",
                 {{"t_max", sampling.t_max},
                  {"n_samples", sampling.n_samples},
                  {"seed", sampling.seed}}},
                {"quadrature",
                 {{"abs_tol", quadrature.abs_tol},
                  {"rel_tol", quadrature.rel_tol},
                  {"max_subdivisions", quadrature.max_subdivisions}}},
                {"band_factor", band_factor},
                {"match_tol", match_tol},
                {"output_dir", output_dir}};
    }

    void set_key(const std::string& key, const std::string& value) {
        auto parse_fields = [](const std::string& s) {
            std::vector<double> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
            return out;
        };
        if (key == "geometry") geometry = GeometrySpec::parse(value);
        else if (key == "gamma") gamma = std::stod(value);
        else if (key == "J") coupling_J = std::stod(value);
        else if (key == "fields") fields = parse_fields(value);
        else if (key == "beta_tilde_init") beta_tilde_init = std::stod(value);
        else if (key == "beta_lo") beta_grid.lo = std::stod(value);
        else if (key == "beta_hi") beta_grid.hi = std::stod(value);
        else if (key == "beta_count") beta_grid.count = std::stoi(value);
        else if (key == "t_max") sampling.t_max = std::stod(value);
        else if (key == "n_samples") sampling.n_samples = std::stoi(value);
        else if (key == "seed") sampling.seed = std::stoull(value);
        else if (key == "quad_abs_tol") quadrature.abs_tol = std::stod(value);
        else if (key == "quad_rel_tol") quadrature.rel_tol = std::stod(value);
        else if (key == "quad_max_subdivisions") quadrature.max_subdivisions = std::stoi(value);
        else if (key == "band_factor") band_factor = std::stod(value);
        else if (key == "match_tol") match_tol = std::stod(value);
        else if (key == "output_dir") output_dir = value;
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }

    /// key = value lines; '#' starts a comment.
    static ExperimentConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file " + path);
        ExperimentConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                if (a == std::string::npos) return std::string{};
                const auto b = s.find_last_not_of(" \t\r");
                return s.substr(a, b - a + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected key = value");
            try {
                cfg.set_key(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            } catch (const std::exception& e) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                                         e.what());
            }
        }
        if (const char* env = std::getenv("XYQ_OUTPUT_DIR")) cfg.output_dir = env;
        return cfg;
    }
};

/// One equilibrium curve with its refinement evaluator attached.
struct QuantityCurve {
    Quantity quantity;
    BondType bond;
    EquilibriumCurve curve;
};

struct LongTimeValue {
    Quantity quantity;
    BondType bond;
    double a_over_J;
    double value;
    double std_error;
};

struct RunResults {
    std::vector<QuantityCurve> curves;
    std::vector<LongTimeValue> long_time;
    nlohmann::json diagnostics = nlohmann::json::array();
};

namespace detail {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline EntanglementValue entanglement_of_rdm(const Eigen::Matrix4cd& rdm) {
    // Tiny negative eigenvalues from quadrature/sampling noise are clipped
    // through the correlator path's PSD handling.
    return logarithmic_negativity(TwoSiteState{rdm});
}

}  // namespace detail

/// Computes every published quantity for one configuration: equilibrium
/// curves at the post-quench field h = 0, long-time averages per initial
/// field, and ergodicity verdicts.
class ExperimentRunner {
public:
    explicit ExperimentRunner(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
    }

    const ExperimentConfig& config() const { return cfg_; }

    /// Equilibrium curves only.
    RunResults sweep() {
        RunResults r;
        compute_curves(r);
        return r;
    }

    /// Curves plus long-time averages and diagnostics.
    RunResults run() {
        RunResults r;
        compute_curves(r);
        compute_long_time(r);
        return r;
    }

    /// Classification of every (quantity, bond, field) row.
    nlohmann::json verdict_table(const RunResults& r) const {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& lt : r.long_time) {
            const QuantityCurve* qc = nullptr;
            for (const auto& c : r.curves)
                if (c.quantity == lt.quantity && c.bond == lt.bond) qc = &c;
            if (!qc) continue;
            const ErgodicityVerdict v =
                classify(lt.value, qc->curve, cfg_.beta_tilde_init, cfg_.band_factor,
                         cfg_.match_tol);
            nlohmann::json row = v.to_json();
            row["quantity"] = to_string(lt.quantity);
            row["geometry"] = cfg_.geometry.label();
            row["bond"] = to_string(lt.bond);
            row["a_over_J"] = lt.a_over_J;
            row["gamma"] = cfg_.gamma;
            row["beta_init"] = cfg_.beta_tilde_init;
            row["long_time_value"] = lt.value;
            row["std_error"] = lt.std_error;
            rows.push_back(std::move(row));
        }
        return rows;
    }

    /// Emits CSV/JSON artifacts under the configured output directory and
    /// returns the manifest.
    nlohmann::json emit(const RunResults& r, const nlohmann::json& verdicts) const {
        namespace fs = std::filesystem;
        fs::create_directories(cfg_.output_dir);
        std::vector<std::string> files;

        auto metadata_block = [&](std::ostream& os) {
            os << "# " << kVersion << "\n";
            os << "# geometry = " << cfg_.geometry.label() << "\n";
            os << "# gamma = " << detail::fmt12(cfg_.gamma)
               << ", J = " << detail::fmt12(cfg_.coupling_J)
               << ", beta_tilde_init = " << detail::fmt12(cfg_.beta_tilde_init) << "\n";
            if (!cfg_.geometry.infinite && cfg_.geometry.kind == LatticeKind::Ladder)
                os << "# site ordering: rail-major (rail 0 sites, then rail 1)\n";
            if (!cfg_.geometry.infinite && cfg_.geometry.kind == LatticeKind::Torus)
                os << "# site ordering: row-major\n";
        };

        for (const auto& qc : r.curves) {
            const std::string name =
                "eq_" + to_string(qc.quantity) + "_" + to_string(qc.bond) + ".csv";
            std::ofstream os(fs::path(cfg_.output_dir) / name);
            metadata_block(os);
            os << "beta_tilde,value,err_estimate\n";
            for (const auto& p : qc.curve.points)
                os << detail::fmt12(p.beta_tilde) << "," << detail::fmt12(p.value) << ","
                   << detail::fmt12(p.error_estimate) << "\n";
            files.push_back(name);
        }

        std::map<std::pair<Quantity, BondType>, std::vector<const LongTimeValue*>> grouped;
        for (const auto& lt : r.long_time) grouped[{lt.quantity, lt.bond}].push_back(&lt);
        for (const auto& [key, vals] : grouped) {
            const std::string name = "longtime_" + to_string(key.first) + "_" +
                                     to_string(key.second) + ".csv";
            std::ofstream os(fs::path(cfg_.output_dir) / name);
            metadata_block(os);
            os << "a_over_J,long_time_value,std_error\n";
            for (const auto* lt : vals)
                os << detail::fmt12(lt->a_over_J) << "," << detail::fmt12(lt->value) << ","
                   << detail::fmt12(lt->std_error) << "\n";
            files.push_back(name);
        }

        {
            std::ofstream os(fs::path(cfg_.output_dir) / "verdicts.json");
            os << verdicts.dump(2) << "\n";
            files.push_back("verdicts.json");
        }
        if (!r.diagnostics.empty()) {
            std::ofstream os(fs::path(cfg_.output_dir) / "diagnostics.json");
            os << r.diagnostics.dump(2) << "\n";
            files.push_back("diagnostics.json");
        }

        nlohmann::json manifest;
        manifest["version"] = kVersion;
        manifest["config"] = cfg_.to_json();
        manifest["files"] = files;
        {
            std::ofstream os(fs::path(cfg_.output_dir) / "manifest.json");
            os << manifest.dump(2) << "\n";
        }
        return manifest;
    }

private:
    void compute_curves(RunResults& r) {
        if (cfg_.geometry.infinite)
            compute_curves_infinite(r);
        else
            compute_curves_finite(r);
    }

    void compute_long_time(RunResults& r) {
        if (cfg_.geometry.infinite)
            compute_long_time_infinite(r);
        else
            compute_long_time_finite(r);
    }

    // ---- infinite chain ----------------------------------------------------

    void compute_curves_infinite(RunResults& r) {
        auto eval_full = [cfg = cfg_](double bt) {
            const ChainPoint pt{0.0, bt, cfg.gamma};
            return equilibrium_correlator_set(pt, cfg.quadrature);
        };
        std::vector<QuantityCurve> curves;
        for (Quantity q : all_quantities()) {
            EquilibriumCurve curve;
            curve.quantity = to_string(q);
            curve.evaluator = [eval_full, q](double bt) {
                const CorrelatorEstimate est = eval_full(bt);
                return quantity_of(est.set, infinite_chain_entanglement(est.set), q);
            };
            curves.push_back({q, BondType::ChainBond, std::move(curve)});
        }
        for (double bt : cfg_.beta_grid.values()) {
            const CorrelatorEstimate est = eval_full(bt);
            const EntanglementValue en = infinite_chain_entanglement(est.set);
            for (auto& qc : curves)
                qc.curve.points.push_back(
                    {bt, quantity_of(est.set, en, qc.quantity),
                     qc.quantity == Quantity::EN ? 0.0 : est.error_estimate});
        }
        for (auto& qc : curves) r.curves.push_back(std::move(qc));
    }

    void compute_long_time_infinite(RunResults& r) {
        for (double a : cfg_.fields) {
            const ChainPoint pt{a / cfg_.coupling_J, cfg_.beta_tilde_init, cfg_.gamma};
            const CorrelatorEstimate est = evolved_correlator_set(pt, cfg_.quadrature);
            const EntanglementValue en = infinite_chain_entanglement(est.set);
            for (Quantity q : all_quantities())
                r.long_time.push_back({q, BondType::ChainBond, a,
                                       quantity_of(est.set, en, q),
                                       q == Quantity::EN ? 0.0 : est.error_estimate});
            r.diagnostics.push_back({{"a_over_J", a},
                                     {"max_off_diagonal", est.set.max_off_diagonal()},
                                     {"correlators", est.set.to_json()}});
        }
    }

    // ---- finite geometries -------------------------------------------------

    struct FiniteBasis {
        Lattice lattice;
        std::shared_ptr<SpectralDecomposition> sd1;
        std::vector<std::pair<BondType, std::shared_ptr<PairReduction>>> pairs;
    };

    const FiniteBasis& finite_basis() {
        if (!basis_) {
            FiniteBasis b;
            b.lattice = build_lattice(cfg_.geometry.kind, cfg_.geometry.dims);
            const ModelParams params(cfg_.coupling_J, cfg_.gamma, 0.0);
            b.sd1 = std::make_shared<SpectralDecomposition>(
                spectral_decompose(build_hamiltonian(b.lattice, params, 0.0)));
            for (const auto& [type, bond] : representative_bonds(b.lattice))
                b.pairs.emplace_back(type,
                                     std::make_shared<PairReduction>(
                                         *b.sd1, b.lattice.n_sites, bond.first, bond.second));
            basis_ = std::move(b);
        }
        return *basis_;
    }

    void compute_curves_finite(RunResults& r) {
        const FiniteBasis& b = finite_basis();
        const double J = cfg_.coupling_J;
        const std::size_t first = r.curves.size();
        for (const auto& [type, pr] : b.pairs) {
            for (Quantity q : all_quantities()) {
                EquilibriumCurve curve;
                curve.quantity = to_string(q);
                // sd is captured alongside pr so the evaluator stays valid
                // after the runner is destroyed (pr references sd internally).
                auto eval = [sd = b.sd1, pr, q, J](double bt) {
                    const Eigen::Matrix4cd rdm = pr->thermal_rdm(bt / J);
                    const CorrelatorSet set = correlators_from_two_site(rdm);
                    const EntanglementValue en = detail::entanglement_of_rdm(rdm);
                    return quantity_of(set, en, q);
                };
                for (double bt : cfg_.beta_grid.values())
                    curve.points.push_back({bt, eval(bt), 0.0});
                curve.evaluator = eval;
                r.curves.push_back({q, type, std::move(curve)});
            }
        }
        if (b.pairs.size() < 2) return;
        // Bond-count-weighted average over bond types.
        const auto weights = bond_type_weights(b.lattice);
        for (Quantity q : all_quantities()) {
            std::vector<std::pair<double, std::function<double(double)>>> parts;
            const QuantityCurve* ref = nullptr;
            for (std::size_t k = first; k < r.curves.size(); ++k) {
                const auto& qc = r.curves[k];
                if (qc.quantity != q) continue;
                for (const auto& [t, w] : weights)
                    if (t == qc.bond) parts.emplace_back(w, qc.curve.evaluator);
                if (!ref) ref = &qc;
            }
            EquilibriumCurve curve;
            curve.quantity = to_string(q);
            curve.evaluator = [parts](double bt) {
                double acc = 0.0;
                for (const auto& [w, f] : parts) acc += w * f(bt);
                return acc;
            };
            for (std::size_t i = 0; i < ref->curve.points.size(); ++i) {
                double acc = 0.0;
                for (std::size_t k = first; k < r.curves.size(); ++k) {
                    const auto& qc = r.curves[k];
                    if (qc.quantity != q) continue;
                    for (const auto& [t, w] : weights)
                        if (t == qc.bond) acc += w * qc.curve.points[i].value;
                }
                curve.points.push_back({ref->curve.points[i].beta_tilde, acc, 0.0});
            }
            r.curves.push_back({q, BondType::Average, std::move(curve)});
        }
    }

    void compute_long_time_finite(RunResults& r) {
        const FiniteBasis& b = finite_basis();
        const ModelParams params(cfg_.coupling_J, cfg_.gamma, 0.0);
        const double beta_init = cfg_.beta_tilde_init / cfg_.coupling_J;
        const std::vector<double> times = sample_times(cfg_.sampling);

        const auto weights = bond_type_weights(b.lattice);
        for (double a : cfg_.fields) {
            std::optional<QuenchDynamics> qd;
            {
                const SpectralDecomposition sd0 =
                    spectral_decompose(build_hamiltonian(b.lattice, params, a));
                qd.emplace(*b.sd1, sd0, beta_init);
            }
            std::vector<LongTimeValue> per_type;
            for (const auto& [type, pr] : b.pairs) {
                const Eigen::Matrix4cd de_rdm = qd->diagonal_ensemble_rdm(*pr);
                const CorrelatorSet de_set = correlators_from_two_site(de_rdm);
                for (Quantity q : all_quantities()) {
                    if (q == Quantity::EN) continue;
                    per_type.push_back({q, type, a, quantity_of(de_set, {}, q), 0.0});
                }
                // Entanglement is nonlinear: sample the evolved two-site state.
                const auto rdms = qd->sampled_rdms(*pr, times);
                std::vector<double> en_samples;
                en_samples.reserve(rdms.size());
                for (const auto& rdm : rdms)
                    en_samples.push_back(detail::entanglement_of_rdm(rdm).e_n);
                const TimeAverageResult en_avg =
                    summarize_samples(en_samples, cfg_.sampling);
                per_type.push_back({Quantity::EN, type, a, en_avg.mean,
                                    en_avg.std_error});
                r.diagnostics.push_back(
                    {{"a_over_J", a},
                     {"bond", to_string(type)},
                     {"max_off_diagonal_diag_ensemble", de_set.max_off_diagonal()},
                     {"e_n_of_time_averaged_state",
                      detail::entanglement_of_rdm(de_rdm).e_n},
                     {"e_n_time_average", en_avg.mean},
                     {"e_n_std_error", en_avg.std_error},
                     {"n_samples", en_avg.n_samples},
                     {"window_T", en_avg.window_T},
                     {"seed", en_avg.seed}});
            }
            for (const auto& lt : per_type) r.long_time.push_back(lt);
            if (b.pairs.size() >= 2) {
                for (Quantity q : all_quantities()) {
                    double mean = 0.0, var = 0.0;
                    for (const auto& lt : per_type) {
                        if (lt.quantity != q) continue;
                        for (const auto& [t, w] : weights)
                            if (t == lt.bond) {
                                mean += w * lt.value;
                                var += w * w * lt.std_error * lt.std_error;
                            }
                    }
                    r.long_time.push_back(
                        {q, BondType::Average, a, mean, std::sqrt(var)});
                }
            }
        }
    }

    ExperimentConfig cfg_;
    std::optional<FiniteBasis> basis_;
};

}  // namespace xyq

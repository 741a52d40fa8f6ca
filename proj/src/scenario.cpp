#include "tqd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tqd/costspeed.hpp"

namespace tqd
{
    using nlohmann::json;

    // ---------------------------------------------------------------------------------------
    // Configuration
    // ---------------------------------------------------------------------------------------

    namespace
    {
        const std::vector<std::string> kScenarios = {"fig1", "fig2a", "fig2b", "relations-fuzz", "nv-pulse", "custom"};

        template <typename T>
        void read(const json& j, const std::string& key, T& into)
        {
            try
            {
                into = j.get<T>();
            }
            catch (const json::exception& e)
            {
                throw ConfigError("config key '" + key + "': " + e.what());
            }
        }
    } // namespace

    ScenarioConfig ScenarioConfig::defaults_for(const std::string& scenario)
    {
        ScenarioConfig c;
        c.scenario = scenario;
        if (scenario == "fig2b")
        {
            c.tau = 0.1;
        }
        else if (scenario == "custom")
        {
            c.propagate = true;
        }
        return c;
    }

    ScenarioConfig ScenarioConfig::from_json_text(const std::string& text, const ScenarioConfig& base)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error& e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object())
        {
            throw ConfigError("config must be a JSON object");
        }

        ScenarioConfig c = base;
        for (const auto& [key, value] : doc.items())
        {
            if (key == "scenario")
            {
                std::string s;
                read(value, key, s);
                if (s != base.scenario)
                {
                    throw ConfigError("config scenario '" + s + "' conflicts with requested '" + base.scenario + "'");
                }
            }
            else if (key == "delta_over_kappa") read(value, key, c.delta_over_kappa);
            else if (key == "kappa") read(value, key, c.kappa);
            else if (key == "tau") read(value, key, c.tau);
            else if (key == "alpha") read(value, key, c.alpha);
            else if (key == "beta_scaled") read(value, key, c.beta_scaled);
            else if (key == "omega0_over_kappa") read(value, key, c.omega0_over_kappa);
            else if (key == "spin") read(value, key, c.spin);
            else if (key == "protocol") read(value, key, c.protocol);
            else if (key == "level") read(value, key, c.level);
            else if (key == "propagate") read(value, key, c.propagate);
            else if (key == "counterdiabatic") read(value, key, c.counterdiabatic);
            else if (key == "samples") read(value, key, c.samples);
            else if (key == "rk4_steps") read(value, key, c.rk4_steps);
            else if (key == "nv_steps") read(value, key, c.nv_steps);
            else if (key == "pulse_samples") read(value, key, c.pulse_samples);
            else if (key == "seed") read(value, key, c.seed);
            else if (key == "fuzz_count") read(value, key, c.fuzz_count);
            else if (key == "fuzz_patterned") read(value, key, c.fuzz_patterned);
            else if (key == "tau_grid") read(value, key, c.tau_grid);
            else if (key == "delta_grid") read(value, key, c.delta_grid);
            else if (key == "csv") read(value, key, c.csv_path);
            else if (key == "svg") read(value, key, c.svg_path);
            else if (key == "precision") read(value, key, c.precision);
            else throw ConfigError("unknown config key '" + key + "'");
        }
        c.validate();
        return c;
    }

    ScenarioConfig ScenarioConfig::from_file(const std::string& path, const ScenarioConfig& base)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw ConfigError("cannot read config file " + path);
        }
        std::ostringstream text;
        text << in.rdbuf();
        return from_json_text(text.str(), base);
    }

    void ScenarioConfig::validate() const
    {
        auto positive = [](double x, const char* name) {
            if (!(x > 0) || !std::isfinite(x))
            {
                throw ConfigError(std::string(name) + " must be positive and finite");
            }
        };
        if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
        {
            throw ConfigError("unknown scenario '" + scenario + "'");
        }
        positive(delta_over_kappa, "delta_over_kappa");
        positive(kappa, "kappa");
        positive(tau, "tau");
        positive(alpha, "alpha");
        positive(omega0_over_kappa, "omega0_over_kappa");
        positive(spin, "spin");
        if (!(beta_scaled >= 0) || !std::isfinite(beta_scaled))
        {
            throw ConfigError("beta_scaled must be nonnegative and finite");
        }
        if (protocol != "collective" && protocol != "individual" && protocol != "none")
        {
            throw ConfigError("protocol must be collective, individual or none");
        }
        if (samples < 2)
        {
            throw ConfigError("samples must be at least 2");
        }
        if (rk4_steps < kMinRk4Steps || nv_steps < kMinRk4Steps)
        {
            throw ConfigError("rk4_steps and nv_steps must be at least 100");
        }
        if (pulse_samples < 0 || pulse_samples == 1)
        {
            throw ConfigError("pulse_samples must be 0 (auto) or at least 2");
        }
        if (fuzz_count < 1 || fuzz_patterned < 0)
        {
            throw ConfigError("fuzz_count must be positive and fuzz_patterned nonnegative");
        }
        for (double x : tau_grid)
        {
            positive(x, "tau_grid entry");
        }
        for (double x : delta_grid)
        {
            positive(x, "delta_grid entry");
        }
        if (tau_grid.size() < 2 || delta_grid.size() < 2)
        {
            throw ConfigError("tau_grid and delta_grid need at least two values");
        }
        if (precision < 1 || precision > 17)
        {
            throw ConfigError("precision must be within [1, 17]");
        }
        try
        {
            const SpinOperators s = make_spin(spin);
            if (protocol == "individual" && std::abs(level) > s.spin + 1e-12)
            {
                throw ConfigError("level outside [-spin, spin]");
            }
            if (protocol == "individual" && std::abs(level + s.spin - std::round(level + s.spin)) > 1e-12)
            {
                throw ConfigError("level must differ from spin by an integer");
            }
        }
        catch (const InvalidSpin& e)
        {
            throw ConfigError(e.what());
        }
    }

    LZ3Params ScenarioConfig::lz() const
    {
        return LZ3Params{delta_over_kappa * kappa, kappa, tau, alpha};
    }

    // ---------------------------------------------------------------------------------------
    // Sweeps (first figure, custom runs)
    // ---------------------------------------------------------------------------------------

    std::string level_label(double m)
    {
        const long twice = std::lround(2.0 * m);
        if (twice == 0)
        {
            return "0";
        }
        const std::string sign = twice > 0 ? "p" : "m";
        const long mag = std::labs(twice);
        return mag % 2 == 0 ? sign + std::to_string(mag / 2) : sign + std::to_string(mag) + "_2";
    }

    void SweepRecord::validate() const
    {
        const Index n = samples();
        auto check = [n](const auto& a, const char* name) {
            if (a.rows() != n || !a.allFinite())
            {
                throw std::logic_error(std::string("sweep column ") + name + " has wrong length or non-finite entries");
            }
        };
        check(lambda, "lambda");
        check(field, "V");
        check(collective_rate, "dC");
        check(individual_rates, "dC_n");
        check(speed, "v");
        check(level_speeds, "v_n");
        if (fidelity)
        {
            check(*fidelity, "fidelity");
        }
        if (!t.allFinite())
        {
            throw std::logic_error("sweep times not finite");
        }
    }

    SweepRecord compute_sweep(const ScenarioConfig& cfg, const std::optional<DriveProtocol>& propagate_with)
    {
        cfg.validate();
        SweepRecord rec;
        rec.params = cfg.lz();
        rec.spin = cfg.spin;
        const HamiltonianTrajectory traj = lz_trajectory(rec.params, cfg.spin);
        const Index dim = traj.dim();
        const Index n = cfg.samples;
        const CanonicalEnsemble ensemble = canonical_populations(traj, cfg.beta_scaled);

        // Column j holds magnetic number S - j, i.e. ascending level dim - 1 - j.
        auto level_of_column = [dim](Index j) { return dim - 1 - j; };
        for (Index j = 0; j < dim; ++j)
        {
            rec.level_labels.push_back(level_label(cfg.spin - static_cast<double>(j)));
        }

        rec.t.resize(n);
        rec.lambda.resize(n);
        rec.field.resize(n);
        rec.collective_rate.resize(n);
        rec.individual_rates.resize(n, dim);
        rec.speed.resize(n);
        rec.level_speeds.resize(n, dim);

        for (Index i = 0; i < n; ++i)
        {
            const double t = i + 1 == n ? rec.params.tau : rec.params.tau * static_cast<double>(i) / static_cast<double>(n - 1);
            const SpectralFrame frame = spectral_frame(traj, t);
            const CostReport cost = cost_report(frame, rec.params.alpha);
            const SpeedReport speed = ensemble_speed(frame, ensemble);

            rec.t(i) = t;
            rec.lambda(i) = linear_sweep(rec.params, t).lambda;
            rec.field(i) = lz3_counterdiabatic_field(rec.params, t);
            rec.collective_rate(i) = cost.collective_rate;
            rec.speed(i) = speed.speed;
            for (Index j = 0; j < dim; ++j)
            {
                const auto level = level_of_column(j);
                rec.individual_rates(i, j) = cost.individual_rates[static_cast<std::size_t>(level)];
                rec.level_speeds(i, j) = speed.level_speeds(level);
            }
        }

        if (propagate_with || cfg.propagate)
        {
            // Round the step count up so every sample time lies on the RK4 grid.
            const int intervals = static_cast<int>(n - 1);
            const int stride = (cfg.rk4_steps + intervals - 1) / intervals;
            const std::optional<DriveProtocol> protocol = propagate_with;
            const TrackingReport tracking = track_levels(traj, protocol, stride * intervals, stride);
            Eigen::MatrixXd fid(n, dim);
            for (Index j = 0; j < dim; ++j)
            {
                fid.col(j) = tracking.fidelity.row(level_of_column(j)).transpose();
            }
            rec.fidelity = fid;
        }
        rec.validate();
        return rec;
    }

    namespace
    {
        std::optional<DriveProtocol> configured_protocol(const ScenarioConfig& cfg)
        {
            if (cfg.protocol == "none")
            {
                return std::nullopt;
            }
            if (cfg.protocol == "individual")
            {
                return DriveProtocol::individual(lz_level_index(cfg.spin, cfg.level));
            }
            return DriveProtocol::collective();
        }

        CsvTable sweep_table(const SweepRecord& rec, int precision, bool raw)
        {
            const double tau = rec.params.tau;
            const double cost_scale = std::pow(tau, rec.params.alpha);
            std::vector<std::string> header = {"t", "t_over_tau", "lambda", "V"};
            auto add_group = [&](const std::string& stem, const std::string& suffix) {
                header.push_back(stem + suffix);
                for (const auto& l : rec.level_labels)
                {
                    header.push_back(stem + "_" + l + suffix);
                }
            };
            if (raw)
            {
                add_group("dC", "");
                add_group("v", "");
            }
            add_group("dC", "_norm");
            add_group("v", "_norm");
            if (rec.fidelity)
            {
                for (const auto& l : rec.level_labels)
                {
                    header.push_back("fid_" + l);
                }
            }

            CsvTable table(header, precision);
            const Index levels = static_cast<Index>(rec.level_labels.size());
            for (Index i = 0; i < rec.samples(); ++i)
            {
                std::vector<CsvTable::Cell> row = {rec.t(i), rec.t(i) / tau, rec.lambda(i), rec.field(i)};
                auto push_group = [&](double total, const auto& levels_row, double scale) {
                    row.emplace_back(total * scale);
                    for (Index j = 0; j < levels; ++j)
                    {
                        row.emplace_back(levels_row(j) * scale);
                    }
                };
                if (raw)
                {
                    push_group(rec.collective_rate(i), rec.individual_rates.row(i), 1.0);
                    push_group(rec.speed(i), rec.level_speeds.row(i), 1.0);
                }
                push_group(rec.collective_rate(i), rec.individual_rates.row(i), cost_scale);
                push_group(rec.speed(i), rec.level_speeds.row(i), tau);
                if (rec.fidelity)
                {
                    for (Index j = 0; j < levels; ++j)
                    {
                        row.emplace_back((*rec.fidelity)(i, j));
                    }
                }
                table.add_row(std::move(row));
            }
            return table;
        }

        std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }
    } // namespace

    SweepRecord run_fig1(const ScenarioConfig& cfg)
    {
        return compute_sweep(cfg, cfg.propagate ? std::optional<DriveProtocol>(DriveProtocol::collective())
                                                : std::nullopt);
    }

    CsvTable fig1_table(const SweepRecord& rec, int precision) { return sweep_table(rec, precision, false); }

    SvgPlot fig1_plot(const SweepRecord& rec)
    {
        SvgPlot plot;
        plot.title = "Cost rates, Delta/kappa = " + format_number(rec.params.delta / rec.params.kappa, 6);
        plot.x_label = "t / tau";
        plot.y_label = "cost rate * tau^alpha";
        const RealVector x = rec.t / rec.params.tau;
        const double scale = std::pow(rec.params.tau, rec.params.alpha);
        plot.series.push_back({"collective", to_std(x), to_std(rec.collective_rate * scale)});
        for (std::size_t j = 0; j < rec.level_labels.size(); ++j)
        {
            plot.series.push_back({"level " + rec.level_labels[j], to_std(x),
                                   to_std(rec.individual_rates.col(static_cast<Index>(j)) * scale)});
        }
        return plot;
    }

    // ---------------------------------------------------------------------------------------
    // Second figure: duration and splitting grids
    // ---------------------------------------------------------------------------------------

    Fig2Result run_fig2(const ScenarioConfig& cfg, Fig2Panel panel)
    {
        Fig2Result result{panel, {}};
        const auto& grid = panel == Fig2Panel::Duration ? cfg.tau_grid : cfg.delta_grid;
        for (double value : grid)
        {
            ScenarioConfig point = cfg;
            point.propagate = false;
            (panel == Fig2Panel::Duration ? point.tau : point.delta_over_kappa) = value;
            result.sweeps.push_back(compute_sweep(point, std::nullopt));
        }
        return result;
    }

    CsvTable fig2_table(const Fig2Result& result, int precision)
    {
        CsvTable table({"panel", "tau", "delta_over_kappa", "t", "t_over_tau", "lambda", "dC", "v", "dC_norm", "v_norm",
                        "log2_sqrt_dC_norm", "log2_v_norm"},
                       precision);
        const std::string panel = result.panel == Fig2Panel::Duration ? "a" : "b";
        for (const auto& rec : result.sweeps)
        {
            const double tau = rec.params.tau;
            const double cost_scale = std::pow(tau, rec.params.alpha);
            for (Index i = 0; i < rec.samples(); ++i)
            {
                const double dc_norm = rec.collective_rate(i) * cost_scale;
                const double v_norm = rec.speed(i) * tau;
                table.add_row({panel, tau, rec.params.delta / rec.params.kappa, rec.t(i), rec.t(i) / tau,
                               rec.lambda(i), rec.collective_rate(i), rec.speed(i), dc_norm, v_norm,
                               0.5 * std::log2(dc_norm), std::log2(v_norm)});
            }
        }
        return table;
    }

    SvgPlot fig2_plot(const Fig2Result& result)
    {
        SvgPlot plot;
        const bool duration = result.panel == Fig2Panel::Duration;
        plot.title = duration ? "Collective cost rate vs duration" : "Collective cost rate vs splitting";
        plot.x_label = "t / tau";
        plot.y_label = "log2 sqrt(dC tau^2)";
        for (const auto& rec : result.sweeps)
        {
            const RealVector x = rec.t / rec.params.tau;
            const RealVector y =
                (rec.collective_rate * std::pow(rec.params.tau, rec.params.alpha)).array().log() / std::log(2.0) * 0.5;
            const std::string name = duration ? "tau = " + format_number(rec.params.tau, 6)
                                              : "Delta/kappa = " + format_number(rec.params.delta / rec.params.kappa, 6);
            plot.series.push_back({name, to_std(x), to_std(y)});
        }
        return plot;
    }

    // ---------------------------------------------------------------------------------------
    // Relation fuzzing
    // ---------------------------------------------------------------------------------------

    namespace
    {
        constexpr double kRelationTolerance = 1e-10;
        constexpr double kMovingCoupling = 1e-12;

        Matrix random_hermitian(std::mt19937_64& rng, Index dim)
        {
            std::normal_distribution<double> normal(0.0, 1.0);
            Matrix g(dim, dim);
            for (Index i = 0; i < dim; ++i)
            {
                for (Index j = 0; j < dim; ++j)
                {
                    g(i, j) = Complex(normal(rng), normal(rng));
                }
            }
            return 0.5 * (g + g.adjoint());
        }

        Matrix random_unitary(std::mt19937_64& rng, Index dim)
        {
            // Eigenvectors of a random Hermitian matrix form a random unitary.
            return hermitian_eig(HermitianOperator::symmetrized(random_hermitian(rng, dim))).vectors;
        }

        RealVector random_populations(std::mt19937_64& rng, Index dim, int index)
        {
            RealVector p = RealVector::Zero(dim);
            if (index % 5 == 4)
            {
                // Pure eigenstate: the chain inequality saturates.
                std::uniform_int_distribution<Index> pick(0, dim - 1);
                p(pick(rng)) = 1.0;
                return p;
            }
            std::exponential_distribution<double> expo(1.0);
            for (Index i = 0; i < dim; ++i)
            {
                p(i) = expo(rng);
            }
            p /= p.sum();
            return p;
        }

        json matrix_json(const Matrix& m)
        {
            json rows = json::array();
            for (Index i = 0; i < m.rows(); ++i)
            {
                json row = json::array();
                for (Index j = 0; j < m.cols(); ++j)
                {
                    row.push_back({m(i, j).real(), m(i, j).imag()});
                }
                rows.push_back(row);
            }
            return rows;
        }

        struct FuzzFrame
        {
            Matrix h;
            Matrix dh;
            double alpha;
            RealVector populations;
        };

        std::string describe(int index, const std::string& relation, double value, const FuzzFrame& f)
        {
            json j;
            j["index"] = index;
            j["relation"] = relation;
            j["value"] = value;
            j["dim"] = f.h.rows();
            j["alpha"] = f.alpha;
            j["H"] = matrix_json(f.h);
            j["dH"] = matrix_json(f.dh);
            j["populations"] = std::vector<double>(f.populations.data(), f.populations.data() + f.populations.size());
            return j.dump();
        }

        void check_frame(FuzzReport& report, int index, const FuzzFrame& f, const SpectralFrame& frame)
        {
            auto flag = [&](bool ok, const std::string& relation, double value) {
                if (!ok)
                {
                    report.violations.push_back(describe(index, relation, value, f));
                }
            };

            const CostReport cost = cost_report(frame, f.alpha);
            const double c = cost.collective_rate;
            const double q = 2.0 / f.alpha;

            const double relation = std::abs(cost_relation_residual(cost)) / c;
            report.max_cost_relation = std::max(report.max_cost_relation, relation);
            flag(relation <= kRelationTolerance, "cost_relation", relation);

            // dC_k^q - dC^q = (dC_k^q - sum_{n != k} dC_n^q) / 2, with the sum recovered from the gap.
            for (Index k = 0; k < frame.dim(); ++k)
            {
                const double ck = cost.individual_rates[static_cast<std::size_t>(k)];
                const double others = std::pow(ck - equality_condition_gap(cost, k), q);
                const double identity =
                    std::abs((std::pow(ck, q) - std::pow(c, q)) - 0.5 * (std::pow(ck, q) - others)) / std::pow(c, q);
                report.max_equality_identity = std::max(report.max_equality_identity, identity);
                flag(identity <= kRelationTolerance, "equality_condition", identity);
            }

            const SpeedReport speed = ensemble_speed(frame, f.populations);
            const double vmax = speed.level_speeds.maxCoeff();
            const double weighted = std::sqrt((f.populations.array() * speed.level_speeds.array().square()).sum());
            const double chain = std::max(speed.speed - weighted, weighted - vmax) / vmax;
            report.max_speed_chain = std::max(report.max_speed_chain, std::max(chain, 0.0));
            flag(chain <= kRelationTolerance, "speed_chain", chain);

            for (Index n = 0; n < frame.dim(); ++n)
            {
                const double vn = speed.level_speeds(n);
                const double r = std::abs(speed_cost_check_individual(frame, n, f.alpha));
                const double rel = vn > 0 ? r / vn : r;
                report.max_speed_cost_individual = std::max(report.max_speed_cost_individual, rel);
                flag(r <= kRelationTolerance * vn, "speed_cost_individual", rel);
            }

            const double margin = speed_cost_check_collective(frame, f.populations, f.alpha);
            if (max_abs(frame.couplings) > kMovingCoupling)
            {
                const double rel = margin / std::pow(c, 1.0 / f.alpha);
                report.min_collective_margin = std::min(report.min_collective_margin, rel);
                flag(margin > 0, "speed_cost_collective", rel);
            }

            if (frame.dim() == 2)
            {
                ++report.two_level_frames;
                for (double ck : cost.individual_rates)
                {
                    const double rel = std::abs(ck - c) / c;
                    report.max_two_level = std::max(report.max_two_level, rel);
                    flag(rel <= kRelationTolerance, "two_level_equality", rel);
                }
            }
        }
    } // namespace

    std::string FuzzReport::to_json() const
    {
        json j;
        j["seed"] = seed;
        j["samples"] = samples;
        j["patterned"] = patterned;
        j["two_level_frames"] = two_level_frames;
        j["tolerance"] = kRelationTolerance;
        j["max_residuals"] = {
            {"cost_relation", max_cost_relation},
            {"equality_condition", max_equality_identity},
            {"speed_chain", max_speed_chain},
            {"speed_cost_individual", max_speed_cost_individual},
            {"two_level_equality", max_two_level},
            {"patterned_middle_gap", max_patterned_gap},
        };
        j["min_collective_margin"] = min_collective_margin;
        j["passed"] = passed();
        json v = json::array();
        for (const auto& s : violations)
        {
            v.push_back(json::parse(s));
        }
        j["violations"] = v;
        return j.dump(2) + "\n";
    }

    FuzzReport run_relations_fuzz(const ScenarioConfig& cfg)
    {
        cfg.validate();
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<Index> pick_dim(2, 6);
        const double alphas[] = {1.0, 2.0, 4.0};

        FuzzReport report;
        report.seed = cfg.seed;
        report.samples = cfg.fuzz_count;
        report.patterned = cfg.fuzz_patterned;
        report.min_collective_margin = 1.0;

        for (int i = 0; i < cfg.fuzz_count; ++i)
        {
            const Index dim = pick_dim(rng);
            FuzzFrame f;
            f.alpha = alphas[i % 3];
            SpectralFrame frame;
            // Redraw in the (measure-zero) event of a degenerate draw.
            for (;;)
            {
                f.h = random_hermitian(rng, dim);
                f.dh = random_hermitian(rng, dim);
                try
                {
                    frame = spectral_frame(HermitianOperator(f.h), HermitianOperator(f.dh), 0.0);
                    break;
                }
                catch (const DegenerateSpectrum&)
                {
                }
            }
            f.populations = random_populations(rng, dim, i);
            check_frame(report, i, f, frame);
        }

        // Three levels whose outer pair is uncoupled: driving the middle level alone costs as much as
        // driving all three, for every alpha.
        std::uniform_real_distribution<double> uniform(-1.0, 1.0);
        for (int i = 0; i < cfg.fuzz_patterned; ++i)
        {
            FuzzFrame f;
            f.alpha = alphas[i % 3];
            const Matrix u = random_unitary(rng, 3);
            RealVector e(3);
            e << -1.0 - std::abs(uniform(rng)), uniform(rng) * 0.5, 1.0 + std::abs(uniform(rng));
            Matrix coupling = random_hermitian(rng, 3);
            coupling(0, 2) = coupling(2, 0) = 0.0;
            f.h = u * e.cast<Complex>().asDiagonal() * u.adjoint();
            f.dh = u * coupling * u.adjoint();
            f.populations = random_populations(rng, 3, i);
            const SpectralFrame frame =
                spectral_frame(HermitianOperator::symmetrized(f.h), HermitianOperator::symmetrized(f.dh), 0.0);
            check_frame(report, cfg.fuzz_count + i, f, frame);

            const CostReport cost = cost_report(frame, f.alpha);
            const double gap = std::abs(equality_condition_gap(cost, 1)) / cost.collective_rate;
            report.max_patterned_gap = std::max(report.max_patterned_gap, gap);
            if (gap > kRelationTolerance)
            {
                report.violations.push_back(describe(cfg.fuzz_count + i, "patterned_middle_gap", gap, f));
            }
        }
        return report;
    }

    // ---------------------------------------------------------------------------------------
    // NV pulse
    // ---------------------------------------------------------------------------------------

    NvPulseResult run_nv_pulse(const ScenarioConfig& cfg)
    {
        cfg.validate();
        NVParams nv;
        nv.omega0_over_kappa = cfg.omega0_over_kappa;
        const PulseSchedule pulse = synthesize_pulse(nv, cfg.lz(), cfg.counterdiabatic);

        const int rows = cfg.pulse_samples > 0 ? cfg.pulse_samples : min_lab_steps(pulse) + 1;
        CsvTable schedule({"t", "epsilon", "delta", "bx"}, cfg.precision);
        for (int i = 0; i < rows; ++i)
        {
            const double t = i + 1 == rows ? cfg.tau : cfg.tau * i / (rows - 1.0);
            schedule.add_row({t, pulse.epsilon(t), pulse.delta(t), pulse.bx(t)});
        }

        const int record_every = std::max(1, cfg.nv_steps / 2000);
        TrackingReport tracking = verify_lab_protocol(pulse, cfg.nv_steps, record_every);

        // Tracking rows follow the ascending level order; columns are m = +1, 0, -1.
        CsvTable table({"t", "fid_p1", "fid_0", "fid_m1"}, cfg.precision);
        for (std::size_t k = 0; k < tracking.times.size(); ++k)
        {
            const auto kk = static_cast<Index>(k);
            table.add_row({tracking.times[k], tracking.fidelity(2, kk), tracking.fidelity(1, kk),
                           tracking.fidelity(0, kk)});
        }
        const bool lost = tracking.min_fidelity(1) < 0.9;
        return NvPulseResult{pulse, std::move(schedule), std::move(tracking), std::move(table), lost};
    }

    // ---------------------------------------------------------------------------------------
    // Dispatch
    // ---------------------------------------------------------------------------------------

    namespace
    {
        void emit(const CsvTable& table, const std::string& path, std::ostream& out)
        {
            if (path.empty())
            {
                table.write(out);
            }
            else
            {
                table.save(path);
            }
        }

        std::string tracking_path(const std::string& path)
        {
            const std::string ext = ".csv";
            if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
            {
                return path.substr(0, path.size() - ext.size()) + ".tracking.csv";
            }
            return path + ".tracking.csv";
        }
    } // namespace

    int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& log)
    {
        cfg.validate();
        if (cfg.scenario == "fig1" || cfg.scenario == "custom")
        {
            const SweepRecord rec = cfg.scenario == "fig1" ? run_fig1(cfg) : compute_sweep(cfg, configured_protocol(cfg));
            emit(cfg.scenario == "fig1" ? fig1_table(rec, cfg.precision) : sweep_table(rec, cfg.precision, true),
                 cfg.csv_path, out);
            if (!cfg.svg_path.empty())
            {
                fig1_plot(rec).save(cfg.svg_path);
            }
            if (rec.fidelity)
            {
                const RealVector worst = rec.fidelity->colwise().minCoeff().transpose();
                for (std::size_t j = 0; j < rec.level_labels.size(); ++j)
                {
                    log << "min tracking fidelity level " << rec.level_labels[j] << ": "
                        << format_number(worst(static_cast<Index>(j)), 12) << '\n';
                }
            }
            return kExitOk;
        }
        if (cfg.scenario == "fig2a" || cfg.scenario == "fig2b")
        {
            const Fig2Result result =
                run_fig2(cfg, cfg.scenario == "fig2a" ? Fig2Panel::Duration : Fig2Panel::Splitting);
            emit(fig2_table(result, cfg.precision), cfg.csv_path, out);
            if (!cfg.svg_path.empty())
            {
                fig2_plot(result).save(cfg.svg_path);
            }
            return kExitOk;
        }
        if (cfg.scenario == "relations-fuzz")
        {
            const FuzzReport report = run_relations_fuzz(cfg);
            const std::string text = report.to_json();
            if (cfg.csv_path.empty())
            {
                out << text;
            }
            else
            {
                std::ofstream f(cfg.csv_path, std::ios::binary);
                if (!(f << text))
                {
                    throw std::runtime_error("cannot write " + cfg.csv_path);
                }
            }
            log << (report.passed() ? "all relations hold" : "relation violations found") << " ("
                << report.samples + report.patterned << " frames)\n";
            return report.passed() ? kExitOk : kExitRelationViolation;
        }

        // nv-pulse
        const NvPulseResult r = run_nv_pulse(cfg);
        emit(r.schedule, cfg.csv_path, out);
        if (!cfg.csv_path.empty())
        {
            r.tracking_table.save(tracking_path(cfg.csv_path));
        }
        if (!cfg.svg_path.empty())
        {
            SvgPlot plot;
            plot.title = "Drive envelope delta(t)";
            plot.x_label = "t";
            plot.y_label = "delta";
            PlotSeries s{"delta", {}, {}};
            const CsvData data = parse_csv(r.schedule.str());
            s.x = data.numbers("t");
            s.y = data.numbers("delta");
            plot.series.push_back(std::move(s));
            plot.save(cfg.svg_path);
        }
        const char* names[] = {"m1", "0", "p1"};
        for (Index n = 0; n < r.tracking.levels(); ++n)
        {
            log << "min lab-frame tracking fidelity level " << names[n] << ": "
                << format_number(r.tracking.min_fidelity(n), 12) << '\n';
        }
        if (r.middle_level_lost)
        {
            log << "middle level not tracked (min fidelity below 0.9)\n";
        }
        return kExitOk;
    }
} // namespace tqd

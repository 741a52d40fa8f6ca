#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tqd/csv.hpp"
#include "tqd/dynamics.hpp"
#include "tqd/model.hpp"
#include "tqd/nvframe.hpp"
#include "tqd/svg.hpp"

namespace tqd
{
    // Exit codes of the scenario runner.
    inline constexpr int kExitOk = 0;
    inline constexpr int kExitIoOrConfig = 1;
    inline constexpr int kExitRelationViolation = 2;

    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    /// Every field is optional in the JSON document; defaults reproduce the first figure.
    struct ScenarioConfig
    {
        std::string scenario = "fig1"; // fig1 | fig2a | fig2b | relations-fuzz | nv-pulse | custom

        double delta_over_kappa = 0.1;
        double kappa = 1.0;
        double tau = 1.0;
        double alpha = 2.0;
        double beta_scaled = 0.5;
        double omega0_over_kappa = 200.0;
        double spin = 1.0;

        std::string protocol = "collective"; // collective | individual | none (custom scenario)
        double level = 0.0;                  // magnetic number of the protected level for "individual"
        bool propagate = false;              // add tracking-fidelity columns (custom turns this on)
        bool counterdiabatic = true;         // nv-pulse: include V(t) in delta(t)

        int samples = 400;
        int rk4_steps = kDefaultRk4Steps;
        int nv_steps = 200000;
        int pulse_samples = 0; // 0: 40 rows per drive period
        std::uint64_t seed = 42;
        int fuzz_count = 200;
        int fuzz_patterned = 50;
        std::vector<double> tau_grid{0.1, 1.0, 10.0, 100.0};
        std::vector<double> delta_grid{0.1, 1.0, 10.0, 100.0};

        std::string csv_path;
        std::string svg_path;
        int precision = 17;

        /// Throws ConfigError for unknown keys, wrong types or out-of-range values.
        /// Values in `text` override `base`; a "scenario" key must agree with base.scenario.
        static ScenarioConfig from_json_text(const std::string& text, const ScenarioConfig& base);
        static ScenarioConfig from_file(const std::string& path, const ScenarioConfig& base);
        static ScenarioConfig from_json_text(const std::string& text) { return from_json_text(text, ScenarioConfig{}); }
        static ScenarioConfig defaults_for(const std::string& scenario);

        void validate() const;
        LZ3Params lz() const;
    };

    /// Per-sample analytics along a sweep. Level columns run over magnetic numbers m = +S, ..., -S.
    struct SweepRecord
    {
        LZ3Params params;
        double spin = 1.0;
        std::vector<std::string> level_labels;
        RealVector t;
        RealVector lambda;
        RealVector field; // V(t)
        RealVector collective_rate;
        Eigen::MatrixXd individual_rates; // (sample, level)
        RealVector speed;
        Eigen::MatrixXd level_speeds;
        std::optional<Eigen::MatrixXd> fidelity;

        Index samples() const { return t.size(); }
        /// Throws std::logic_error unless all arrays have `samples` rows and finite entries.
        void validate() const;
    };

    /// "p1", "0", "m1", "p1_2", ... for magnetic number m.
    std::string level_label(double m);

    SweepRecord compute_sweep(const ScenarioConfig& cfg, const std::optional<DriveProtocol>& propagate_with);

    SweepRecord run_fig1(const ScenarioConfig& cfg);
    CsvTable fig1_table(const SweepRecord& rec, int precision = 17);
    SvgPlot fig1_plot(const SweepRecord& rec);

    enum class Fig2Panel
    {
        Duration, // vary tau at fixed Delta/kappa
        Splitting // vary Delta/kappa at fixed tau
    };

    struct Fig2Result
    {
        Fig2Panel panel;
        std::vector<SweepRecord> sweeps; // one per grid value
    };

    Fig2Result run_fig2(const ScenarioConfig& cfg, Fig2Panel panel);
    CsvTable fig2_table(const Fig2Result& result, int precision = 17);
    SvgPlot fig2_plot(const Fig2Result& result);

    struct FuzzReport
    {
        std::uint64_t seed = 0;
        int samples = 0;
        int patterned = 0;
        double max_cost_relation = 0;  // |dC - [1/2 sum dC_n^{2/a}]^{a/2}| / dC
        double max_equality_identity = 0; // identity behind the equality condition, relative
        double max_speed_chain = 0;    // violation of v <= sqrt(sum p v_n^2) <= max v_n, relative
        double max_speed_cost_individual = 0;
        double min_collective_margin = 0; // min (dC^{1/a} - v) / dC^{1/a} over moving frames
        double max_two_level = 0;         // |dC_n - dC| / dC over dim-2 frames
        double max_patterned_gap = 0;     // |gap of middle level| / dC on LZ-pattern frames
        int two_level_frames = 0;
        std::vector<std::string> violations; // JSON-serialized offending samples
        bool passed() const { return violations.empty(); }
        std::string to_json() const;
    };

    FuzzReport run_relations_fuzz(const ScenarioConfig& cfg);

    struct NvPulseResult
    {
        PulseSchedule pulse;
        CsvTable schedule;
        TrackingReport tracking;
        CsvTable tracking_table;
        bool middle_level_lost = false; // min fidelity of the m = 0 branch below 0.9
    };

    NvPulseResult run_nv_pulse(const ScenarioConfig& cfg);

    /// Run the configured scenario, writing outputs to cfg.csv_path (stdout when empty) and
    /// cfg.svg_path. Returns a process exit code.
    int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& log);
} // namespace tqd

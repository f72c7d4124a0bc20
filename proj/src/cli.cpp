#include "courtlift/cli.hpp"

#include "courtlift/dataio.hpp"
#include "courtlift/errors.hpp"
#include "courtlift/parallel.hpp"
#include "courtlift/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace courtlift {

namespace {

using nlohmann::json;

/// Bad flag combinations detected after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

std::filesystem::path csv_path_for(const std::filesystem::path& out)
{
    std::filesystem::path p = out;
    if (p.extension() == ".json")
        return p.replace_extension(".csv");
    return p.string() + ".csv";
}

json point_json(const Eigen::VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json reconstruction_json(const Reconstruction& r)
{
    return {{"ball_3d", point_json(r.ball_3d)},
            {"ground_projection", point_json(r.ground_projection)},
            {"foot_pixel", point_json(r.foot_pixel)},
            {"vertical_angle", r.vertical_angle},
            {"plane_gap", r.plane_gap}};
}

PredictorSpec parse_predictor(const std::string& text)
{
    if (text.empty())
        return PredictorSpec{};
    json j;
    try
    {
        if (text.front() == '{')
        {
            j = json::parse(text);
        }
        else
        {
            std::ifstream in(text);
            if (!in)
                throw UsageError("cannot open predictor spec file " + text);
            j = json::parse(in);
        }
    }
    catch (const json::exception& e)
    {
        throw UsageError(std::string("malformed predictor spec: ") + e.what());
    }
    return j.get<PredictorSpec>();
}

HeightDistSpec height_dist_from(const std::string& name)
{
    if (name == "deepsport_like")
        return HeightDistSpec::deepsport_like();
    if (name == "ballistic_like")
        return HeightDistSpec::ballistic_like();
    if (name == "uniform")
        return HeightDistSpec::uniform();
    throw UsageError("unknown height distribution '" + name + "'");
}

/// Flags shared by `synth` and the inline synthetic input of `evaluate`/`sweep`.
struct SynthFlags
{
    std::size_t n = 0;
    int arenas = 15;
    int folds = 5;
    std::uint64_t seed = 0;
    std::string heights = "deepsport_like";
    std::optional<double> p_above;
    double max_height = 6.0;
    ArenaSpec arena;

    void add_to(CLI::App& app, const std::string& prefix)
    {
        app.add_option("--" + prefix + "arenas", arenas, "Number of arenas (one camera each)")
            ->check(CLI::PositiveNumber);
        app.add_option("--" + prefix + "folds", folds, "Number of arena folds, named A, B, ...")
            ->check(CLI::Range(1, 26));
        app.add_option("--" + prefix + "heights", heights, "deepsport_like | ballistic_like | uniform");
        app.add_option("--" + prefix + "p-above", p_above, "Override the fraction of balls above 3 m")
            ->check(CLI::Range(0.0, 1.0));
        app.add_option("--" + prefix + "max-height", max_height, "Highest ball (m)");
        app.add_option("--" + prefix + "focal-min", arena.focal.min, "Smallest focal length (px)");
        app.add_option("--" + prefix + "focal-max", arena.focal.max, "Largest focal length (px)");
        app.add_option("--" + prefix + "image-width", arena.image_width, "Image width (px)");
        app.add_option("--" + prefix + "image-height", arena.image_height, "Image height (px)");
        app.add_option("--" + prefix + "k1-min", arena.k1.min);
        app.add_option("--" + prefix + "k1-max", arena.k1.max);
        app.add_option("--" + prefix + "k2-min", arena.k2.min);
        app.add_option("--" + prefix + "k2-max", arena.k2.max);
    }

    Dataset generate(unsigned threads) const
    {
        HeightDistSpec dist = height_dist_from(heights);
        if (p_above)
            dist.p_above_3m = *p_above;
        dist.max_height = max_height;
        Dataset ds;
        ds.samples = generate_dataset(seed, n, arena, dist, arenas, threads);
        ds.folds = assign_folds(arenas, folds);
        return ds;
    }
};

/// Either a dataset file or an inline synthetic spec, restricted to a test fold when asked.
struct InputFlags
{
    std::string dataset;
    std::size_t synth_n = 0;
    SynthFlags synth;
    std::string test_fold;

    void add_to(CLI::App& app)
    {
        auto* ds = app.add_option("--dataset", dataset, "Dataset file (JSON Lines)");
        auto* sn = app.add_option("--synth", synth_n, "Generate N synthetic samples instead of reading a dataset")
                       ->check(CLI::PositiveNumber);
        ds->excludes(sn);
        app.add_option("--synth-seed", synth.seed, "Seed of the inline synthetic dataset");
        synth.add_to(app, "synth-");
        app.add_option("--test-fold", test_fold, "Evaluate only the arenas of this fold");
    }

    std::vector<BallSample> load(unsigned threads) const
    {
        if (dataset.empty() == (synth_n == 0))
            throw UsageError("exactly one of --dataset or --synth is required");
        Dataset ds;
        if (!dataset.empty())
        {
            ds = load_dataset(dataset);
        }
        else
        {
            SynthFlags s = synth;
            s.n = synth_n;
            ds = s.generate(threads);
        }
        if (!test_fold.empty())
            return split(ds, test_fold).second.samples;
        // a full-dataset run still proves the folds partition the arenas
        for (const auto& name : ds.folds)
            split(ds, name.first);
        return std::move(ds.samples);
    }
};

json evaluation_json(const EvaluationResult& result, const EvaluationOptions& options)
{
    json repeats = json::array();
    for (const auto& r : result.repeats)
        repeats.push_back(to_json(r));
    return {{"method", to_string(options.method)},
            {"predictor", options.predictor},
            {"seed", options.seed},
            {"ball_diameter_m", options.ball_diameter_m},
            {"aggregate", to_json(result.aggregate)},
            {"repeats", repeats}};
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            throw UsageError("bad grid value '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos || !(v >= 0.0))
            throw UsageError("bad grid value '" + item + "'");
        grid.push_back(v);
    }
    if (grid.empty())
        throw UsageError("--grid needs at least one noise level");
    return grid;
}

}  // namespace

std::string to_string(Method m)
{
    return m == Method::Height ? "height" : "diameter";
}

std::uint64_t repeat_seed(std::uint64_t run_seed, std::uint64_t spec_seed, std::size_t repeat)
{
    return mix_seed(mix_seed(run_seed, spec_seed), repeat);
}

EvaluationResult run_evaluation(std::span<const BallSample> samples, const EvaluationOptions& options)
{
    if (samples.empty())
        throw Error(ErrorCode::EmptyInput, "no samples to evaluate");
    if (options.repeats < 1)
        throw Error(ErrorCode::EmptyInput, "need at least one repeat");
    validate(options.predictor);

    EvaluationResult result;
    const std::size_t n = samples.size();
    for (std::size_t r = 0; r < options.repeats; ++r)
    {
        PredictorSpec spec = options.predictor;
        spec.seed = repeat_seed(options.seed, options.predictor.seed, r);

        std::vector<HeightPrediction> heights(n);
        std::vector<Reconstruction> recons(n);
        std::vector<char> ok(n, 0);
        parallel_for(n, options.threads, [&](std::size_t i) {
            const BallSample& s = samples[i];
            try
            {
                if (options.method == Method::Height)
                {
                    heights[i] = predict_height(spec, s, i);
                    recons[i] = reconstruct_from_height(s.cal, s.ball_px, heights[i]);
                }
                else
                {
                    const double d = predict_diameter(spec, s, i);
                    recons[i] = reconstruct_from_diameter(s.cal, s.ball_px, d, options.ball_diameter_m);
                }
                ok[i] = 1;
            }
            catch (const Error& e)
            {
                // Noisy predictions may send the foot above the horizon; such
                // samples are counted, not fatal. Anything else is.
                if (e.code() != ErrorCode::GroundIntersectionFailed &&
                    e.code() != ErrorCode::BothPlanesDegenerate && e.code() != ErrorCode::DegenerateVertical)
                    throw;
            }
        });

        std::vector<BallSample> kept_samples;
        std::vector<HeightPrediction> kept_heights;
        std::vector<Reconstruction> kept_recons;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!ok[i])
                continue;
            kept_samples.push_back(samples[i]);
            kept_heights.push_back(heights[i]);
            kept_recons.push_back(recons[i]);
        }
        if (kept_samples.empty())
            throw Error(ErrorCode::EmptyInput, "every reconstruction failed in repeat " + std::to_string(r));

        EvalReport report = options.method == Method::Height
                                ? evaluate(kept_samples, kept_recons, kept_heights)
                                : evaluate(kept_samples, kept_recons);
        report.n_failed = n - kept_samples.size();
        report.per_sample_errors.clear();
        result.repeats.push_back(std::move(report));
    }
    result.aggregate = aggregate_repeats(result.repeats);
    return result;
}

unsigned resolve_threads(int requested)
{
    if (requested > 0)
        return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("COURTLIFT_THREADS"))
    {
        const int v = std::atoi(env);
        if (v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"courtlift: monocular 3D ball localization from pixel heights"};
    app.require_subcommand(1);
    int threads_flag = 0;
    app.add_option("--threads", threads_flag, "Worker threads (default: COURTLIFT_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);

    // synth
    SynthFlags synth;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic annotated dataset");
    synth_cmd->add_option("--n", synth.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--out", synth_out, "Output dataset path")->required();
    synth.add_to(*synth_cmd, "");

    // evaluate
    InputFlags eval_input;
    EvaluationOptions eval_opts;
    std::string eval_predictor, eval_method = "height", eval_out;
    auto* eval_cmd = app.add_subcommand("evaluate", "Run k seeded repeats and report the metrics");
    eval_input.add_to(*eval_cmd);
    eval_cmd->add_option("--predictor", eval_predictor, "Predictor spec: inline JSON or path to a JSON file");
    eval_cmd->add_option("--method", eval_method, "height | diameter")
        ->check(CLI::IsMember({"height", "diameter"}));
    eval_cmd->add_option("--repeats,-k", eval_opts.repeats, "Number of repeats")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", eval_opts.seed, "Run seed");
    eval_cmd->add_option("--ball-diameter", eval_opts.ball_diameter_m, "Real ball diameter (m)")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--out", eval_out, "Report path (JSON; CSV written alongside)")->required();

    // reconstruct
    std::string calib_path;
    double rx = 0.0, ry = 0.0, rh = 0.0;
    auto* rec_cmd = app.add_subcommand("reconstruct", "Lift one ball pixel and pixel height to 3D");
    rec_cmd->set_help_flag("--help", "Print this help message and exit");
    rec_cmd->add_option("--calib", calib_path, "Calibration JSON file")->required();
    rec_cmd->add_option("--x", rx, "Ball pixel x (raw image)")->required();
    rec_cmd->add_option("--y", ry, "Ball pixel y (raw image)")->required();
    rec_cmd->add_option("--h", rh, "Pixel height of the ball above its ground projection")->required();

    // sweep
    InputFlags sweep_input;
    std::string grid_text, sweep_kind = "gaussian", sweep_out;
    double sweep_nu = 3.0;
    std::size_t sweep_repeats = 1;
    std::uint64_t sweep_seed = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Metrics as a function of pixel-height noise (MAE px)");
    sweep_input.add_to(*sweep_cmd);
    sweep_cmd->add_option("--grid", grid_text, "Comma-separated noise MAE levels in px, e.g. 0,5,10,20,40")
        ->required();
    sweep_cmd->add_option("--kind", sweep_kind, "gaussian | heavy_tailed")
        ->check(CLI::IsMember({"gaussian", "heavy_tailed"}));
    sweep_cmd->add_option("--nu", sweep_nu, "Student-t degrees of freedom");
    sweep_cmd->add_option("--repeats,-k", sweep_repeats, "Repeats per level")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", sweep_seed, "Run seed");
    sweep_cmd->add_option("--out", sweep_out, "CSV path (JSON written alongside)")->required();

    std::vector<const char*> argv{"courtlift"};
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::ParseError& e)
    {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try
    {
        const unsigned threads = resolve_threads(threads_flag);

        if (synth_cmd->parsed())
        {
            const Dataset ds = synth.generate(threads);
            save_dataset(ds, synth_out);
            out << "wrote " << ds.samples.size() << " samples (" << synth.arenas << " arenas, " << ds.folds.size()
                << " folds) to " << synth_out << '\n';
            const std::vector<double> edges{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
            const auto counts = height_histogram(ds.samples, edges);
            out << "ball height histogram:\n";
            for (std::size_t b = 0; b < counts.size(); ++b)
            {
                const std::string label = b + 1 < edges.size() ? fmt::format("[{}, {}) m", edges[b], edges[b + 1])
                                                               : fmt::format("[{}, inf) m", edges[b]);
                out << fmt::format("  {:<12} {:>8}  {:6.2f}%\n", label, counts[b],
                                   100.0 * static_cast<double>(counts[b]) / static_cast<double>(ds.samples.size()));
            }
            return 0;
        }

        if (eval_cmd->parsed())
        {
            eval_opts.predictor = parse_predictor(eval_predictor);
            eval_opts.method = eval_method == "height" ? Method::Height : Method::Diameter;
            eval_opts.threads = threads;
            const auto samples = eval_input.load(threads);
            const EvaluationResult result = run_evaluation(samples, eval_opts);
            write_text(eval_out, evaluation_json(result, eval_opts).dump(2) + "\n");
            write_text(csv_path_for(eval_out), to_csv(result.aggregate));
            const auto& a = result.aggregate;
            out << fmt::format("{} samples, k={}, method={}: MAPE {:.4f} +- {:.4f} m, MA3DE {:.4f} +- {:.4f} m\n",
                               a.n_samples, a.k, to_string(eval_opts.method), a.mape_m.mean, a.mape_m.stddev,
                               a.ma3de_m.mean, a.ma3de_m.stddev);
            return 0;
        }

        if (rec_cmd->parsed())
        {
            std::ifstream in(calib_path);
            if (!in)
                throw Error(ErrorCode::IoFailure, "cannot open " + calib_path);
            CameraCalibration cal;
            try
            {
                cal = calibration_from_json(json::parse(in));
            }
            catch (const json::exception& e)
            {
                throw Error(ErrorCode::MalformedRecord, std::string("calibration: ") + e.what());
            }
            for (const auto v : validate(cal))
                throw Error(ErrorCode::InvalidSpec, "invalid calibration: " + to_string(v));
            const Reconstruction r = reconstruct_from_height(cal, ImagePoint(rx, ry), HeightPrediction{rh});
            out << reconstruction_json(r).dump(2) << '\n';
            return 0;
        }

        if (sweep_cmd->parsed())
        {
            const std::vector<double> grid = parse_grid(grid_text);
            const auto samples = sweep_input.load(threads);
            std::string csv = "noise_mae_px,mae_px,mape_m,mdnape_m,ma3de_m,mdna3de_m,n_failed\n";
            json rows = json::array();
            for (const double level : grid)
            {
                EvaluationOptions opts;
                if (level > 0.0)
                {
                    opts.predictor.kind = predictor_kind_from_string(sweep_kind);
                    opts.predictor.nu = sweep_nu;
                    opts.predictor.target_mae = level;
                }
                opts.repeats = sweep_repeats;
                opts.seed = sweep_seed;
                opts.threads = threads;
                const EvaluationResult result = run_evaluation(samples, opts);
                const auto& a = result.aggregate;
                csv += fmt::format("{},{},{},{},{},{},{}\n", level, a.mae_px ? a.mae_px->mean : 0.0, a.mape_m.mean,
                                   a.mdnape_m.mean, a.ma3de_m.mean, a.mdna3de_m.mean, a.n_failed);
                rows.push_back({{"noise_mae_px", level}, {"predictor", opts.predictor}, {"aggregate", to_json(a)}});
            }
            write_text(sweep_out, csv);
            std::filesystem::path json_out = sweep_out;
            json_out = json_out.extension() == ".csv" ? json_out.replace_extension(".json")
                                                      : std::filesystem::path(sweep_out + ".json");
            write_text(json_out, rows.dump(2) + "\n");
            out << csv;
            return 0;
        }
    }
    catch (const UsageError& e)
    {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    catch (const Error& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace courtlift

#include "courtlift/dataio.hpp"

#include "courtlift/errors.hpp"
#include "courtlift/random.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace courtlift {

namespace {

using nlohmann::json;

json optional_number(double v)
{
    return std::isnan(v) ? json(nullptr) : json(v);
}

double number_or_nan(const json& j, const char* key)
{
    const json& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec_from(const json& j)
{
    if (!j.is_array() || j.size() != N)
        throw json::type_error::create(302, "expected array of " + std::to_string(N) + " numbers", &j);
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i)
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

template <class V>
json vec_to(const V& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(v[i]);
    return arr;
}

json sample_to_json(const BallSample& s)
{
    return {{"id", s.sample_id},          {"arena", s.arena_id},
            {"cal", calibration_to_json(s.cal)}, {"ball_3d", vec_to(s.ball_3d)},
            {"ball_px", vec_to(s.ball_px)}, {"foot_px", vec_to(s.foot_px)},
            {"h_true", optional_number(s.h_true)}, {"diam_px", optional_number(s.diameter_px_true)}};
}

BallSample sample_from_json(const json& j)
{
    BallSample s;
    s.sample_id = j.at("id").get<std::uint64_t>();
    s.arena_id = j.at("arena").get<int>();
    s.cal = calibration_from_json(j.at("cal"));
    s.ball_3d = vec_from<3>(j.at("ball_3d"));
    s.ball_px = vec_from<2>(j.at("ball_px"));
    s.foot_px = vec_from<2>(j.at("foot_px"));
    s.h_true = number_or_nan(j, "h_true");
    s.diameter_px_true = number_or_nan(j, "diam_px");
    return s;
}

}  // namespace

json calibration_to_json(const CameraCalibration& cal)
{
    json r = json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            r.push_back(cal.rotation(i, k));
    const Distortion& d = cal.distortion;
    return {{"fx", cal.fx},
            {"fy", cal.fy},
            {"cx", cal.cx},
            {"cy", cal.cy},
            {"skew", cal.skew},
            {"R", r},
            {"t", vec_to(cal.translation)},
            {"dist", {{"k1", d.k1}, {"k2", d.k2}, {"k3", d.k3}, {"p1", d.p1}, {"p2", d.p2}}},
            {"width", cal.image_width},
            {"height", cal.image_height}};
}

CameraCalibration calibration_from_json(const json& j)
{
    CameraCalibration cal;
    cal.fx = j.at("fx").get<double>();
    cal.fy = j.at("fy").get<double>();
    cal.cx = j.at("cx").get<double>();
    cal.cy = j.at("cy").get<double>();
    cal.skew = j.value("skew", 0.0);
    const json& r = j.at("R");
    if (!r.is_array() || r.size() != 9)
        throw json::type_error::create(302, "\"R\" must be a row-major array of 9 numbers", &r);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            cal.rotation(i, k) = r[static_cast<std::size_t>(3 * i + k)].get<double>();
    cal.translation = vec_from<3>(j.at("t"));
    if (j.contains("dist"))
    {
        const json& d = j["dist"];
        cal.distortion = {d.value("k1", 0.0), d.value("k2", 0.0), d.value("k3", 0.0), d.value("p1", 0.0),
                          d.value("p2", 0.0)};
    }
    cal.image_width = j.at("width").get<int>();
    cal.image_height = j.at("height").get<int>();
    return cal;
}

void check_folds(const Dataset& ds)
{
    std::map<int, std::string> owner;
    for (const auto& [name, arenas] : ds.folds)
        for (int a : arenas)
            if (auto [it, fresh] = owner.emplace(a, name); !fresh)
                throw Error(ErrorCode::FoldViolation,
                            "arena " + std::to_string(a) + " in folds " + it->second + " and " + name);

    std::set<std::uint64_t> ids;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
    {
        const BallSample& s = ds.samples[i];
        if (!owner.contains(s.arena_id))
            throw Error(ErrorCode::FoldViolation,
                        "record " + std::to_string(i) + ": arena " + std::to_string(s.arena_id) + " has no fold");
        if (!ids.insert(s.sample_id).second)
            throw Error(ErrorCode::FoldViolation,
                        "record " + std::to_string(i) + ": duplicate id " + std::to_string(s.sample_id));
    }
}

void write_dataset(const Dataset& ds, std::ostream& sink)
{
    check_folds(ds);
    json folds = json::object();
    for (const auto& [name, arenas] : ds.folds)
        folds[name] = json(std::vector<int>(arenas.begin(), arenas.end()));
    sink << json{{"schema_version", ds.schema_version}, {"folds", folds}}.dump() << '\n';
    for (const auto& s : ds.samples)
        sink << sample_to_json(s).dump() << '\n';
    if (!sink)
        throw Error(ErrorCode::IoFailure, "write failed");
}

Dataset read_dataset(std::istream& source)
{
    std::string line;
    if (!std::getline(source, line))
        throw Error(ErrorCode::MalformedRecord, "missing header line");

    Dataset ds;
    try
    {
        const json header = json::parse(line);
        ds.schema_version = header.at("schema_version").get<int>();
        if (ds.schema_version != kSchemaVersion)
            throw Error(ErrorCode::SchemaVersionMismatch, "found " + std::to_string(ds.schema_version) +
                                                              ", expected " + std::to_string(kSchemaVersion));
        for (const auto& [name, arenas] : header.at("folds").items())
            ds.folds[name] = arenas.get<std::set<int>>();
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::MalformedRecord, std::string("header: ") + e.what());
    }

    std::size_t index = 0;
    while (std::getline(source, line))
    {
        if (line.empty())
            continue;
        try
        {
            ds.samples.push_back(sample_from_json(json::parse(line)));
        }
        catch (const json::exception& e)
        {
            throw Error(ErrorCode::MalformedRecord, "record " + std::to_string(index) + ": " + e.what());
        }
        ++index;
    }
    check_folds(ds);
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    write_dataset(ds, out);
}

Dataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    return read_dataset(in);
}

std::map<std::string, std::set<int>> assign_folds(int n_arenas, int n_folds)
{
    if (n_folds < 1 || n_folds > 26)
        throw Error(ErrorCode::InvalidSpec, "fold count must be within [1, 26]");
    std::map<std::string, std::set<int>> folds;
    for (int a = 0; a < n_arenas; ++a)
        folds[std::string(1, static_cast<char>('A' + a % n_folds))].insert(a);
    return folds;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const std::string& test_fold)
{
    const auto fold = ds.folds.find(test_fold);
    if (fold == ds.folds.end())
        throw Error(ErrorCode::UnknownFold, "'" + test_fold + "'");

    Dataset train, test;
    train.schema_version = test.schema_version = ds.schema_version;
    for (const auto& [name, arenas] : ds.folds)
        (name == test_fold ? test : train).folds[name] = arenas;
    for (const auto& s : ds.samples)
        (fold->second.contains(s.arena_id) ? test : train).samples.push_back(s);

    for (const auto& s : train.samples)
        if (fold->second.contains(s.arena_id))
            throw Error(ErrorCode::FoldViolation, "arena " + std::to_string(s.arena_id) + " leaked into train");
    return {std::move(train), std::move(test)};
}

std::vector<BallSample> rebalance(const std::vector<BallSample>& samples, double threshold_m, std::uint64_t seed)
{
    std::vector<std::size_t> above, below;
    for (std::size_t i = 0; i < samples.size(); ++i)
        (samples[i].ball_3d.z() > threshold_m ? above : below).push_back(i);
    if (above.empty() || below.empty())
        throw Error(ErrorCode::OneSidedDataset, std::to_string(above.size()) + " samples above and " +
                                                    std::to_string(below.size()) + " below " +
                                                    std::to_string(threshold_m) + " m");

    std::vector<BallSample> out = samples;
    const auto& minority = above.size() < below.size() ? above : below;
    const std::size_t deficit = std::max(above.size(), below.size()) - minority.size();
    RandomStream rng(seed, StreamTag::Rebalance, 0);
    out.reserve(samples.size() + deficit);
    for (std::size_t k = 0; k < deficit; ++k)
        out.push_back(samples[minority[rng.below(minority.size())]]);
    return out;
}

}  // namespace courtlift

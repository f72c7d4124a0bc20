#pragma once

#include "courtlift/sample.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace courtlift {

inline constexpr int kSchemaVersion = 1;

/// Samples plus the arena folds used for venue-disjoint train/test splits.
struct Dataset
{
    int schema_version = kSchemaVersion;
    std::vector<BallSample> samples;
    std::map<std::string, std::set<int>> folds;

    bool operator==(const Dataset&) const = default;
};

nlohmann::json calibration_to_json(const CameraCalibration& cal);
CameraCalibration calibration_from_json(const nlohmann::json& j);

/// Throws FoldViolation unless sample ids are unique and every arena sits in exactly one fold.
void check_folds(const Dataset& ds);

/*!
 * JSON Lines: a header object {"schema_version", "folds"} followed by one
 * sample object per line. Doubles are written in shortest round-trip form, so
 * read_dataset(write_dataset(ds)) reproduces every value bit for bit.
 */
void write_dataset(const Dataset& ds, std::ostream& sink);
Dataset read_dataset(std::istream& source);

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Round-robin arena-to-fold assignment with fold names "A", "B", ...
std::map<std::string, std::set<int>> assign_folds(int n_arenas, int n_folds);

/// (train, test): the test side holds exactly the arenas of `test_fold`.
std::pair<Dataset, Dataset> split(const Dataset& ds, const std::string& test_fold);

/*!
 * Oversamples the minority side of `threshold_m` (ball height) with
 * replacement until both sides hold the same count. Originals keep their
 * order and come first; duplicates follow.
 */
std::vector<BallSample> rebalance(const std::vector<BallSample>& samples, double threshold_m, std::uint64_t seed);

}  // namespace courtlift

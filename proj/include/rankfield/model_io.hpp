#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "rankfield/csr.hpp"
#include "rankfield/fpca.hpp"

namespace rankfield {

/// Writes `<stem>.json` and the mean rank function as `<stem>_mean.csv`
/// beside it.
void write_csr_model(const std::filesystem::path& json_path, const CSRModel& model);
CSRModel read_csr_model(const std::filesystem::path& json_path);

/// Writes model.json, mean.csv, component_<j>.csv and scores.csv into `dir`.
/// `ids` labels the score rows (one per fitted function).
void write_pca_model(const std::filesystem::path& dir, const PCAModel& model,
                     std::span<const std::string> ids);

}  // namespace rankfield

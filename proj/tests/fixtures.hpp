#pragma once

#include <filesystem>
#include <string>

#include "fdvrp/cli.hpp"

namespace fixture {

inline std::filesystem::path data(const std::string& rel) { return std::filesystem::path(FDVRP_DATA_DIR) / rel; }

inline std::string text(const std::string& rel) { return fdvrp::cli::read_file(data(rel)); }

inline constexpr const char* jfk_record =
    "AV. PRES JOHN KENNEDY [CENTRAL,LARGEAVENUE,COMMERCIAL]\n"
    "[4062,8629]-[4086,8652]-[4366,9040]-[4360,9052]-[4356,9079]-[4369,9103]-[4386,9115]-[4410,9120]-"
    "[4426,9126]-[4609,9379]-[4608,9403]-[4615,9421]-[4630,9435]-[4657,9436]-[4768,9592]-[4794,9645]-"
    "[4807,9768]-[4836,9933]-[4840,9987]-[4794,10173]\n";

inline std::string header(int streets) {
    return "PIXEL_VALUE 0.137\nDELIVERY_COST 2190\nMAX_ROUTE 13138\nSTREETS " + std::to_string(streets) + "\n";
}

} // namespace fixture

#ifndef WIDEGAPS_CLI_HPP
#define WIDEGAPS_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "widegaps/core.hpp"

namespace widegaps::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitPropertyFailure = 2,
    kExitInvariantBreach = 3,
};

using Json = nlohmann::ordered_json;

/// 17 significant digits, so every double survives a text round-trip.
std::string format_number(double x);

// CSV. Malformed input throws ParseError.
std::string points_csv(const Embedding& embedding);  // header x0,x1,...
Embedding parse_points_csv(std::string_view text);
std::string labels_csv(std::span<const int> labels);  // one integer per row
std::vector<int> parse_labels_csv(std::string_view text);
std::string distances_csv(const PseudoDistanceMatrix& d);  // full square matrix
/// Square matrix as parsed; symmetry and diagonal are checked by Dataset::from_square.
std::vector<double> parse_matrix_csv(std::string_view text, std::size_t& n);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

std::string sha256_hex(std::string_view bytes);

/// Points, distances, or both (then they must agree).
Dataset load_dataset(const std::string& points_path, const std::string& distances_path);

struct RunManifest {
    std::string command;
    Json config = Json::object();
    std::map<std::string, std::string> input_hashes;
    std::string tool_version{kToolVersion};

    Json to_json() const;
};

/// Full command line, argv[0] excluded. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace widegaps::cli

#endif

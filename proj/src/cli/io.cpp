#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "widegaps/cli.hpp"
#include "widegaps/error.hpp"

namespace widegaps::cli {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
        while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
        fields.push_back(f);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view f, std::size_t row) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
        throw Error(Errc::ParseError, fmt::format("row {}: '{}' is not a number", row + 1, f));
    return v;
}

}  // namespace

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::string points_csv(const Embedding& e) {
    std::string out;
    for (std::size_t c = 0; c < e.dim; ++c) out += fmt::format("{}x{}", c ? "," : "", c);
    out += '\n';
    for (std::size_t i = 0; i < e.n; ++i) {
        const auto row = e.row(i);
        for (std::size_t c = 0; c < e.dim; ++c) {
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

Embedding parse_points_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw Error(Errc::ParseError, "points file is empty");
    const auto header = split_fields(lines[0]);
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] != fmt::format("x{}", c))
            throw Error(Errc::ParseError, "points header must read x0,x1,...");
    Embedding e;
    e.dim = header.size();
    e.n = lines.size() - 1;
    e.coords.reserve(e.n * e.dim);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        if (fields.size() != e.dim)
            throw Error(Errc::ParseError, fmt::format("row {} has {} columns, expected {}", r, fields.size(), e.dim));
        for (auto f : fields) e.coords.push_back(parse_double(f, r));
    }
    return e;
}

std::string labels_csv(std::span<const int> labels) {
    std::string out;
    for (int lab : labels) out += fmt::format("{}\n", lab);
    return out;
}

std::vector<int> parse_labels_csv(std::string_view text) {
    std::vector<int> labels;
    const auto lines = split_lines(text);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        std::string_view f = split_fields(lines[r]).front();
        int v = 0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || ptr != f.data() + f.size() || f.empty() || lines[r].find(',') != std::string_view::npos)
            throw Error(Errc::ParseError, fmt::format("labels row {}: expected one integer", r + 1));
        labels.push_back(v);
    }
    return labels;
}

std::string distances_csv(const PseudoDistanceMatrix& d) {
    std::string out;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
            if (l) out += ',';
            out += format_number(d(i, l));
        }
        out += '\n';
    }
    return out;
}

std::vector<double> parse_matrix_csv(std::string_view text, std::size_t& n) {
    const auto lines = split_lines(text);
    n = lines.size();
    std::vector<double> square;
    square.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto fields = split_fields(lines[r]);
        if (fields.size() != n)
            throw Error(Errc::ParseError, fmt::format("matrix row {} has {} entries, expected {}", r + 1, fields.size(), n));
        for (auto f : fields) square.push_back(parse_double(f, r));
    }
    return square;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::ParseError, "cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(Errc::InvariantBreach, "SHA-256 digest failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

Dataset load_dataset(const std::string& points_path, const std::string& distances_path) {
    if (points_path.empty() && distances_path.empty())
        throw Error(Errc::InvalidArgs, "one of --points or --distances is required");
    std::optional<Embedding> emb;
    if (!points_path.empty()) emb = parse_points_csv(read_file(points_path));
    if (distances_path.empty()) return Dataset::from_points(std::move(*emb));

    std::size_t n = 0;
    const std::vector<double> square = parse_matrix_csv(read_file(distances_path), n);
    Dataset ds = Dataset::from_square(square, n);
    if (!emb) return ds;
    return Dataset::from_points_and_distances(std::move(*emb), ds.distances());
}

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["input_hashes"] = Json::object();
    for (const auto& [k, v] : input_hashes) j["input_hashes"][k] = v;
    j["tool_version"] = tool_version;
    return j;
}

}  // namespace widegaps::cli

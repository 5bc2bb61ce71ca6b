#include "dart/adapters.hpp"

#include <httplib.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dart/hash.hpp"
#include "dart/util.hpp"

namespace dart::amr {

namespace fs = std::filesystem;

FixtureAdapter::FixtureAdapter(const std::string& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw AdapterError("fixture adapter: cannot open manifest: " + manifest_path);
    fs::path base = fs::path(manifest_path).parent_path();
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (util::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw AdapterError("fixture adapter: manifest line " + std::to_string(line_no) +
                               ": " + e.what());
        }
        if (!j.contains("text_sha256") || !j.contains("penman_path")) {
            throw AdapterError("fixture adapter: manifest line " + std::to_string(line_no) +
                               ": missing text_sha256 or penman_path");
        }
        fs::path p(j.at("penman_path").get<std::string>());
        if (p.is_relative()) p = base / p;
        path_by_hash_[j.at("text_sha256").get<std::string>()] = p.string();
    }
}

FixtureAdapter::FixtureAdapter(std::map<std::string, std::string> penman_by_hash)
    : penman_by_hash_(std::move(penman_by_hash)) {}

std::string FixtureAdapter::parse_document(const std::string& text) {
    std::string h = hash::sha256_hex(text);
    if (auto it = penman_by_hash_.find(h); it != penman_by_hash_.end()) return it->second;
    auto it = path_by_hash_.find(h);
    if (it == path_by_hash_.end()) {
        throw AdapterError("fixture adapter: no fixture for text hash " + h);
    }
    try {
        return util::read_file(it->second);
    } catch (const std::exception& e) {
        throw AdapterError(std::string("fixture adapter: ") + e.what());
    }
}

CommandAdapter::CommandAdapter(std::string command) : command_(std::move(command)) {}

std::string CommandAdapter::parse_document(const std::string& text) {
    fs::path dir = fs::temp_directory_path();
    std::string tag = hash::sha256_hex(command_ + "\x01" + text).substr(0, 16);
    fs::path in_path = dir / ("dart-adapter-" + tag + ".in");
    fs::path out_path = dir / ("dart-adapter-" + tag + ".out");
    util::write_file(in_path.string(), text);

    std::string shell_cmd =
        command_ + " < '" + in_path.string() + "' > '" + out_path.string() + "'";
    int status = std::system(shell_cmd.c_str());
    int exit_code = -1;
    if (status != -1 && WIFEXITED(status)) exit_code = WEXITSTATUS(status);

    std::string output;
    std::error_code ec;
    if (fs::exists(out_path, ec)) output = util::read_file(out_path.string());
    fs::remove(in_path, ec);
    fs::remove(out_path, ec);

    if (exit_code != 0) {
        throw AdapterError("command adapter: process exited with code " +
                           std::to_string(exit_code));
    }
    return output;
}

HttpAdapter::HttpAdapter(std::string endpoint) : endpoint_(std::move(endpoint)) {}

std::string HttpAdapter::parse_document(const std::string& text) {
    // Split "scheme://host[:port]/path".
    size_t scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) {
        throw AdapterError("http adapter: invalid endpoint: " + endpoint_);
    }
    size_t path_start = endpoint_.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

    httplib::Client client(base);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, text, "text/plain");
    if (!res) {
        throw AdapterError("http adapter: request to " + endpoint_ +
                           " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw AdapterError("http adapter: endpoint returned status " +
                           std::to_string(res->status));
    }
    return res->body;
}

AmrGraph parse_text_to_amr(const std::string& text, ParserAdapter& adapter) {
    std::string penman = adapter.parse_document(text);
    try {
        return merge_graphs(parse_penman_many(penman));
    } catch (const PenmanError& e) {
        throw AdapterError(std::string("adapter produced invalid PENMAN: ") + e.what());
    }
}

}  // namespace dart::amr

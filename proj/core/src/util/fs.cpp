#include "tsreason/util/fs.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "tsreason/core/error.hpp"

namespace tsreason::util {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("FileNotFound", "cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail("IoError", "read failed on '" + path.string() + "'");
    return std::move(buf).str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            fail("IoError", "cannot create directory '" + path.parent_path().string() +
                                "': " + ec.message());
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("IoError", "cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) fail("IoError", "write failed on '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail("IoError", "cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

}  // namespace tsreason::util

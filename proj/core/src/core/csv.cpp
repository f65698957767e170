#include "tsreason/core/csv.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"

namespace tsreason::csv {
namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (const char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) fail("IoError", "short write to '" + path.string() + "'");
}

}  // namespace

std::string to_string(const Frame& frame) {
    if (frame.empty()) fail("EmptySeries", "refusing to serialize a frame with no columns");
    std::string out = "timestamp";
    for (const auto& col : frame.columns()) {
        out += ',';
        out += col.name().empty() ? "value" : col.name();
    }
    out += '\n';
    const TimeAxis& axis = frame.axis();
    for (std::size_t i = 0; i < frame.n_rows(); ++i) {
        out += format_iso8601(axis.at(i));
        for (const auto& col : frame.columns()) {
            out += ',';
            out += format_double(col[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_string(const TimeSeries& series) {
    return to_string(Frame({series}));
}

Frame frame_from_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        fail("BadCsv", origin + ": empty file, expected a header row");
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 2 || header[0] != "timestamp")
        fail("BadCsv", origin + ": header must start with 'timestamp' and have at least one value column");

    std::vector<std::int64_t> stamps;
    std::vector<std::vector<double>> cols(header.size() - 1);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            fail("BadCsv", origin + " line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
        stamps.push_back(parse_iso8601(cells[0]));
        for (std::size_t c = 1; c < cells.size(); ++c) {
            try {
                cols[c - 1].push_back(parse_double(cells[c]));
            } catch (const OpError&) {
                fail("BadCsv", origin + " line " + std::to_string(line_no) + ": bad number '" +
                                   cells[c] + "'");
            }
        }
    }
    if (stamps.empty()) fail("BadCsv", origin + ": no data rows");

    TimeAxis axis;
    axis.start = stamps.front();
    axis.step_seconds = stamps.size() > 1 ? stamps[1] - stamps[0] : 3600;
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        if (stamps[i] - stamps[i - 1] != axis.step_seconds)
            fail("BadCsv", origin + ": timestamps are not uniformly spaced at row " +
                               std::to_string(i + 1));
    }

    Frame frame;
    for (std::size_t c = 0; c < cols.size(); ++c)
        frame.add_column(TimeSeries(header[c + 1], axis, std::move(cols[c])));
    return frame;
}

TimeSeries series_from_string(const std::string& text, const std::string& origin) {
    Frame frame = frame_from_string(text, origin);
    if (frame.n_cols() != 1)
        fail("BadCsv", origin + ": expected exactly one value column, got " +
                           std::to_string(frame.n_cols()));
    return frame.column(std::size_t{0});
}

void write_frame(const std::filesystem::path& path, const Frame& frame) {
    write_file(path, to_string(frame));
}

void write_series(const std::filesystem::path& path, const TimeSeries& series) {
    write_file(path, to_string(series));
}

Frame read_frame(const std::filesystem::path& path) {
    return frame_from_string(read_file(path), path.string());
}

TimeSeries read_series(const std::filesystem::path& path) {
    return series_from_string(read_file(path), path.string());
}

}  // namespace tsreason::csv

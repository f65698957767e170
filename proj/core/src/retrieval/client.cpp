#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "tsreason/retrieval/client.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tsreason/core/csv.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/core/time_axis.hpp"
#include "tsreason/util/fs.hpp"
#include "tsreason/util/hash.hpp"

namespace tsreason::retrieval {

const char* to_string(QueryKind k) {
    return k == QueryKind::weather ? "weather" : "electricity";
}

const char* to_string(Resolution r) {
    return r == Resolution::hourly ? "hourly" : "daily";
}

namespace {

std::int64_t step_of(Resolution r) {
    return r == Resolution::hourly ? 3600 : 86400;
}

std::pair<double, double> parse_lat_lon(const std::string& location) {
    const auto comma = location.find(',');
    if (comma == std::string::npos)
        fail("BadQuery", "weather location must be \"lat,lon\", got '" + location + "'");
    double lat = 0.0;
    double lon = 0.0;
    try {
        lat = parse_double(location.substr(0, comma));
        lon = parse_double(location.substr(comma + 1));
    } catch (const OpError&) {
        fail("BadQuery", "weather location must be \"lat,lon\", got '" + location + "'");
    }
    if (lat < -90.0 || lat > 90.0) fail("BadQuery", "latitude out of [-90,90]");
    if (lon < -180.0 || lon > 180.0) fail("BadQuery", "longitude out of [-180,180]");
    return {lat, lon};
}

/// Accept date-only and minute-precision timestamps alongside full ISO 8601.
std::int64_t parse_timestamp(const std::string& text) {
    std::string t = text;
    if (t.size() == 10) t += "T00:00:00Z";
    else if (t.size() == 16) t += ":00Z";
    else if (t.size() == 19) t += "Z";
    return parse_iso8601(t);
}

}  // namespace

void validate_query(const RetrievalQuery& q) {
    if (q.location.empty()) fail("BadQuery", "location is empty");
    if (q.variables.empty()) fail("BadQuery", "no variables requested");
    for (const auto& v : q.variables)
        if (v.empty()) fail("BadQuery", "empty variable name in request");
    std::int64_t start = 0;
    std::int64_t end = 0;
    try {
        start = parse_timestamp(q.start);
        end = parse_timestamp(q.end);
    } catch (const OpError& e) {
        fail("BadQuery", std::string("bad time range: ") + e.what());
    }
    if (start >= end) fail("BadQuery", "start must precede end");
    if (q.kind == QueryKind::weather) parse_lat_lon(q.location);
}

std::string canonical_key(const RetrievalQuery& q) {
    std::vector<std::string> vars = q.variables;
    std::sort(vars.begin(), vars.end());
    nlohmann::json j;
    j["end"] = q.end;
    j["kind"] = to_string(q.kind);
    j["location"] = q.location;
    j["resolution"] = to_string(q.resolution);
    j["start"] = q.start;
    j["variables"] = vars;
    return util::sha256_hex(j.dump());
}

namespace {

class HttpTransport : public Transport {
public:
    std::string get(const std::string& url) override {
        const auto scheme = url.find("://");
        if (scheme == std::string::npos) fail("UpstreamError", "URL has no scheme: " + url);
        const auto slash = url.find('/', scheme + 3);
        const std::string base = slash == std::string::npos ? url : url.substr(0, slash);
        const std::string path = slash == std::string::npos ? "/" : url.substr(slash);
        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(60);
        auto res = client.Get(path);
        if (!res)
            fail("UpstreamError", "GET " + url + " failed: " + httplib::to_string(res.error()));
        if (res->status != 200)
            fail("UpstreamError", "HTTP " + std::to_string(res->status) + " from " + url);
        return res->body;
    }
};

/// Rows of `frame` whose timestamps fall in [start, end).
Frame slice_frame(const Frame& frame, std::int64_t start, std::int64_t end,
                  const std::vector<std::string>& variables) {
    const TimeAxis axis = frame.axis();
    const std::int64_t n = static_cast<std::int64_t>(frame.n_rows());
    std::int64_t first = 0;
    if (start > axis.start)
        first = (start - axis.start + axis.step_seconds - 1) / axis.step_seconds;
    std::int64_t last = n;  // exclusive
    if (axis.at(0) < end) {
        last = (end - 1 - axis.start) / axis.step_seconds + 1;
        last = std::min(last, n);
    } else {
        last = 0;
    }
    if (first >= last)
        fail("EmptyRange", "fixture covers no rows in [" + format_iso8601(start) + ", " +
                               format_iso8601(end) + ")");
    Frame out;
    for (const auto& var : variables) {
        const TimeSeries* col = frame.find(var);
        if (col == nullptr) fail("EmptyRange", "fixture lacks column '" + var + "'");
        out.add_column(col->slice(static_cast<std::size_t>(first),
                                  static_cast<std::size_t>(last - first)));
    }
    return out;
}

}  // namespace

std::unique_ptr<Transport> make_http_transport() {
    return std::make_unique<HttpTransport>();
}

Client::Client(ClientConfig cfg, std::unique_ptr<Transport> transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {}

Client::~Client() = default;

Frame Client::fetch(const RetrievalQuery& q) {
    validate_query(q);
    return cfg_.mode == ClientConfig::Mode::offline ? fetch_offline(q) : fetch_live(q);
}

Frame Client::fetch_weather(const RetrievalQuery& q) {
    if (q.kind != QueryKind::weather) fail("BadQuery", "fetch_weather called with non-weather query");
    return fetch(q);
}

Frame Client::fetch_electricity(const RetrievalQuery& q) {
    if (q.kind != QueryKind::electricity)
        fail("BadQuery", "fetch_electricity called with non-electricity query");
    return fetch(q);
}

Frame Client::fetch_offline(const RetrievalQuery& q) {
    if (cfg_.fixture_dir.empty())
        fail("NetworkDisabledNoFixture",
             "offline mode has no fixture directory configured for " +
                 std::string(to_string(q.kind)) + " data");
    const std::filesystem::path manifest_path =
        std::filesystem::path(cfg_.fixture_dir) / "manifest.json";
    if (!std::filesystem::exists(manifest_path))
        fail("NetworkDisabledNoFixture", "no fixture manifest at '" + manifest_path.string() + "'");

    nlohmann::json manifest =
        nlohmann::json::parse(util::read_text_file(manifest_path), nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("fixtures"))
        fail("BadFixture", "manifest '" + manifest_path.string() + "' is malformed");

    const std::int64_t want_start = parse_timestamp(q.start);
    const std::int64_t want_end = parse_timestamp(q.end);
    bool location_seen = false;
    bool range_missed = false;

    for (const auto& entry : manifest["fixtures"]) {
        if (entry.value("kind", "") != to_string(q.kind)) continue;
        if (entry.value("location", "") != q.location) continue;
        location_seen = true;
        if (entry.value("resolution", "") != to_string(q.resolution)) continue;

        const auto& have = entry["variables"];
        const bool vars_ok = std::all_of(q.variables.begin(), q.variables.end(),
                                         [&](const std::string& v) {
                                             return std::find(have.begin(), have.end(), v) !=
                                                    have.end();
                                         });
        if (!vars_ok) continue;

        const std::int64_t have_start = parse_timestamp(entry.value("start", ""));
        const std::int64_t have_end = parse_timestamp(entry.value("end", ""));
        if (want_start < have_start || want_end > have_end) {
            // Partial coverage is rejected rather than silently truncated.
            range_missed = true;
            continue;
        }

        const Frame full = csv::read_frame(std::filesystem::path(cfg_.fixture_dir) /
                                           entry.value("file", ""));
        return slice_frame(full, want_start, want_end, q.variables);
    }

    if (range_missed)
        fail("EmptyRange", "fixtures for " + q.location + " do not cover [" + q.start + ", " +
                               q.end + ")");
    if (q.kind == QueryKind::electricity && !location_seen)
        fail("UnknownZone", "no fixture for zone '" + q.location + "'");
    fail("NetworkDisabledNoFixture",
         "offline mode and no fixture matches " + std::string(to_string(q.kind)) + " query for " +
             q.location);
}

namespace {

std::string weather_url(const ClientConfig& cfg, const RetrievalQuery& q) {
    const auto [lat, lon] = parse_lat_lon(q.location);
    const std::int64_t end = parse_timestamp(q.end);
    std::string vars;
    for (const auto& v : q.variables) {
        if (!vars.empty()) vars += ",";
        vars += v;
    }
    // The archive endpoint takes inclusive whole days.
    const std::string start_date = q.start.substr(0, 10);
    const std::string end_date = format_iso8601(end - 1).substr(0, 10);
    return cfg.weather_base_url + "?latitude=" + format_double(lat) +
           "&longitude=" + format_double(lon) + "&start_date=" + start_date +
           "&end_date=" + end_date + "&" + to_string(q.resolution) + "=" + vars +
           "&timezone=UTC";
}

std::string electricity_url(const ClientConfig& cfg, const RetrievalQuery& q) {
    std::string url = cfg.electricity_base_url +
                      "?frequency=" + std::string(to_string(q.resolution)) +
                      "&facets[respondent][]=" + q.location + "&start=" + q.start.substr(0, 13) +
                      "&end=" + q.end.substr(0, 13);
    for (std::size_t i = 0; i < q.variables.size(); ++i)
        url += "&data[" + std::to_string(i) + "]=" + q.variables[i];
    if (const char* key = std::getenv("TS_REASONER_API_KEY")) url += std::string("&api_key=") + key;
    return url;
}

Frame parse_weather_response(const std::string& body, const RetrievalQuery& q) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) fail("UpstreamError", "weather response is not valid JSON");
    const char* section = to_string(q.resolution);
    if (!j.contains(section)) fail("UpstreamError", "weather response lacks its data section");
    const auto& data = j[section];
    if (!data.contains("time") || !data["time"].is_array() || data["time"].empty())
        fail("EmptyRange", "weather response has no timestamps");

    TimeAxis axis{parse_timestamp(data["time"][0].get<std::string>()), step_of(q.resolution)};
    Frame out;
    for (const auto& var : q.variables) {
        if (!data.contains(var))
            fail("UpstreamError", "weather response lacks variable '" + var + "'");
        std::vector<double> values;
        for (const auto& cell : data[var])
            values.push_back(cell.is_null() ? 0.0 : cell.get<double>());
        out.add_column(TimeSeries(var, axis, std::move(values)));
    }
    return out;
}

Frame parse_electricity_response(const std::string& body, const RetrievalQuery& q) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) fail("UpstreamError", "electricity response is not valid JSON");
    if (!j.contains("response") || !j["response"].contains("data"))
        fail("UpstreamError", "electricity response lacks response.data");
    const auto& rows = j["response"]["data"];
    if (!rows.is_array() || rows.empty()) fail("EmptyRange", "electricity response has no rows");

    TimeAxis axis{parse_timestamp(rows[0].value("period", "")), step_of(q.resolution)};
    Frame out;
    for (const auto& var : q.variables) {
        std::vector<double> values;
        for (const auto& row : rows) {
            // Rows carry either the named series or a generic "value" field.
            if (row.contains(var) && row[var].is_number())
                values.push_back(row[var].get<double>());
            else if (row.contains("value") && row["value"].is_number())
                values.push_back(row["value"].get<double>());
            else
                values.push_back(0.0);
        }
        out.add_column(TimeSeries(var, axis, std::move(values)));
    }
    return out;
}

}  // namespace

Frame Client::fetch_live(const RetrievalQuery& q) {
    const std::string key = canonical_key(q);
    const std::filesystem::path cache_csv =
        cfg_.cache_dir.empty() ? std::filesystem::path()
                               : std::filesystem::path(cfg_.cache_dir) / (key + ".csv");
    if (!cfg_.cache_dir.empty() && std::filesystem::exists(cache_csv))
        return csv::read_frame(cache_csv);

    if (!transport_) transport_ = make_http_transport();
    const std::string url =
        q.kind == QueryKind::weather ? weather_url(cfg_, q) : electricity_url(cfg_, q);
    ++network_calls_;
    const std::string body = transport_->get(url);
    Frame frame = q.kind == QueryKind::weather ? parse_weather_response(body, q)
                                               : parse_electricity_response(body, q);
    frame = slice_frame(frame, parse_timestamp(q.start), parse_timestamp(q.end), q.variables);

    if (!cfg_.cache_dir.empty()) {
        nlohmann::json meta;
        meta["key"] = key;
        meta["kind"] = to_string(q.kind);
        meta["location"] = q.location;
        meta["resolution"] = to_string(q.resolution);
        meta["start"] = q.start;
        meta["end"] = q.end;
        meta["variables"] = q.variables;
        util::write_text_atomic(std::filesystem::path(cfg_.cache_dir) / (key + ".json"),
                                meta.dump(2) + "\n");
        util::write_text_atomic(cache_csv, csv::to_string(frame));
    }
    return frame;
}

}  // namespace tsreason::retrieval

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tsreason/core/time_series.hpp"

namespace tsreason::retrieval {

enum class QueryKind { weather, electricity };
enum class Resolution { hourly, daily };

const char* to_string(QueryKind k);
const char* to_string(Resolution r);

/// Query for external data. `location` is "lat,lon" for weather and a grid
/// zone code for electricity. The time range is [start, end) in ISO 8601 UTC
/// at the requested resolution.
struct RetrievalQuery {
    QueryKind kind = QueryKind::weather;
    std::string location;
    std::string start;
    std::string end;
    std::vector<std::string> variables;
    Resolution resolution = Resolution::hourly;
};

/// Throws OpError("BadQuery") when a field is out of range or missing.
void validate_query(const RetrievalQuery& q);

/// Canonical cache/fixture key: sorted-key JSON of the query with variables
/// sorted, hashed with SHA-256. Invariant to variable-list ordering.
std::string canonical_key(const RetrievalQuery& q);

/// HTTP seam. Production uses an HTTPS client; tests substitute fakes, and
/// offline mode never calls it.
class Transport {
public:
    virtual ~Transport() = default;
    /// GET the URL and return the response body. Throws
    /// OpError("UpstreamError") with the status on non-200 responses.
    virtual std::string get(const std::string& url) = 0;
};

/// Transport backed by httplib over TLS.
std::unique_ptr<Transport> make_http_transport();

struct ClientConfig {
    enum class Mode { offline, live };
    Mode mode = Mode::offline;
    /// Directory holding manifest.json plus fixture CSVs for offline mode.
    std::string fixture_dir;
    /// Live-mode response cache; empty disables caching.
    std::string cache_dir;
    std::string weather_base_url = "https://archive-api.open-meteo.com/v1/archive";
    std::string electricity_base_url = "https://api.eia.gov/v2/electricity/rto/region-data/data/";
};

/// Weather/electricity data client. Offline mode (the default) serves
/// fixtures only and never touches the transport; live mode fetches,
/// parses, and caches responses keyed by canonical query hash.
class Client {
public:
    explicit Client(ClientConfig cfg, std::unique_ptr<Transport> transport = nullptr);
    ~Client();

    Frame fetch(const RetrievalQuery& q);
    Frame fetch_weather(const RetrievalQuery& q);
    Frame fetch_electricity(const RetrievalQuery& q);

    /// Number of transport GETs issued so far (cache/fixture hits excluded).
    int network_calls() const { return network_calls_.load(); }

private:
    Frame fetch_offline(const RetrievalQuery& q);
    Frame fetch_live(const RetrievalQuery& q);

    ClientConfig cfg_;
    std::unique_ptr<Transport> transport_;
    std::atomic<int> network_calls_{0};
};

}  // namespace tsreason::retrieval

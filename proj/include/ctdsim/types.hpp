#ifndef CTDSIM_TYPES_HPP
#define CTDSIM_TYPES_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ctdsim {

/// Dense node identifier, 0..N-1 within a scenario.
using NodeId = std::uint32_t;

/// Simulated time in milliseconds since scenario start.
using SimTime = std::int64_t;

inline constexpr SimTime kMillisecond = 1;
inline constexpr SimTime kSecond = 1000;
inline constexpr SimTime kMinute = 60 * kSecond;

SimTime ms_from_seconds(double seconds);

/// Error raised by config parsing, trace ingestion and scenario validation.
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed list of incident categories; codes 0-5 are stable.
enum class AlertCategory : int {
    Traffic = 0,
    PublicTransport = 1,
    Crowds = 2,
    Crime = 3,
    Nature = 4,
    StreetShow = 5,
};

inline constexpr int kCategoryCount = 6;

/// Canonical lowercase name used in config files and CSV output.
std::string_view category_name(AlertCategory category);

/// Case-insensitive lookup of a canonical category name. Throws SimError
/// naming the offending token when it is not in the closed list.
AlertCategory parse_category(std::string_view text);

/// Planar local coordinates in meters.
struct Position {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);
double distance_sq(const Position& a, const Position& b);

/// A categorized incident report.
struct Alert {
    AlertCategory category = AlertCategory::Traffic;
    Position location;
    SimTime created_at = 0;
    friend bool operator==(const Alert&, const Alert&) = default;
};

/// How two alerts are compared for dedup purposes.
enum class IdentityPolicy {
    Category,      // incident code only
    CategoryCell,  // incident code + spatial grid cell
};

struct KeyPolicy {
    IdentityPolicy policy = IdentityPolicy::Category;
    double cell_size_m = 200.0;
};

/// Dedup identity of an alert. Under the default policy only the category
/// matters; the "category+cell" policy also keys on the grid cell of the
/// reported location. The time window S is enforced by the stores, not here.
struct AlertKey {
    AlertCategory category = AlertCategory::Traffic;
    bool has_cell = false;
    std::int64_t cell_x = 0;
    std::int64_t cell_y = 0;
    friend auto operator<=>(const AlertKey&, const AlertKey&) = default;
};

AlertKey alert_key(const Alert& alert, const KeyPolicy& policy);

std::string to_string(const AlertKey& key);

}  // namespace ctdsim

#endif

#include "ctdsim/types.hpp"

#include <array>
#include <cctype>
#include <cmath>

namespace ctdsim {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "traffic", "public_transport", "crowds", "crime", "nature", "street_show",
};

std::string lowercase(std::string_view text)
{
    std::string out(text);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

SimTime ms_from_seconds(double seconds)
{
    return static_cast<SimTime>(std::llround(seconds * 1000.0));
}

std::string_view category_name(AlertCategory category)
{
    return kCategoryNames[static_cast<std::size_t>(category)];
}

AlertCategory parse_category(std::string_view text)
{
    const std::string token = lowercase(text);
    for (int i = 0; i < kCategoryCount; ++i) {
        if (token == kCategoryNames[static_cast<std::size_t>(i)])
            return static_cast<AlertCategory>(i);
    }
    std::string valid;
    for (auto name : kCategoryNames) {
        if (!valid.empty())
            valid += ", ";
        valid += name;
    }
    throw SimError("unknown category '" + std::string(text) + "' (valid: " + valid + ")");
}

double distance_sq(const Position& a, const Position& b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double distance(const Position& a, const Position& b)
{
    return std::sqrt(distance_sq(a, b));
}

AlertKey alert_key(const Alert& alert, const KeyPolicy& policy)
{
    AlertKey key;
    key.category = alert.category;
    if (policy.policy == IdentityPolicy::CategoryCell) {
        key.has_cell = true;
        key.cell_x = static_cast<std::int64_t>(std::floor(alert.location.x / policy.cell_size_m));
        key.cell_y = static_cast<std::int64_t>(std::floor(alert.location.y / policy.cell_size_m));
    }
    return key;
}

std::string to_string(const AlertKey& key)
{
    std::string out(category_name(key.category));
    if (key.has_cell)
        out += ":" + std::to_string(key.cell_x) + ":" + std::to_string(key.cell_y);
    return out;
}

}  // namespace ctdsim

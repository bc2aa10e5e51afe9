#pragma once

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.h"

namespace sharplab {

// Key-tracking view of a JSON object; unknown keys are reported by full path.
class Fields {
public:
    Fields(const nlohmann::json& j, std::string prefix) : j_(&j), prefix_(std::move(prefix)) {
        if (!j.is_object())
            throw ConfigError("config section \"" + label() + "\" must be a JSON object");
    }

    bool has(const char* k) const {
        used_.insert(k);
        return j_->contains(k);
    }
    const nlohmann::json& get(const char* k) const {
        used_.insert(k);
        auto it = j_->find(k);
        if (it == j_->end())
            throw ConfigError("missing config field \"" + prefix_ + k + "\"");
        return *it;
    }
    double number(const char* k) const {
        const auto& v = get(k);
        if (!v.is_number())
            bad(k, "a number");
        return v.get<double>();
    }
    double number(const char* k, double dflt) const { return has(k) ? number(k) : dflt; }
    long integer(const char* k) const {
        const auto& v = get(k);
        if (!v.is_number_integer())
            bad(k, "an integer");
        return v.get<long>();
    }
    long integer(const char* k, long dflt) const { return has(k) ? integer(k) : dflt; }
    bool boolean(const char* k, bool dflt) const {
        if (!has(k))
            return dflt;
        const auto& v = get(k);
        if (!v.is_boolean())
            bad(k, "a boolean");
        return v.get<bool>();
    }
    std::string str(const char* k) const {
        const auto& v = get(k);
        if (!v.is_string())
            bad(k, "a string");
        return v.get<std::string>();
    }
    void done() const {
        for (auto it = j_->begin(); it != j_->end(); ++it)
            if (!used_.count(it.key()))
                throw ConfigError("unknown config field \"" + prefix_ + it.key() + "\"");
    }

private:
    std::string label() const { return prefix_.empty() ? "(top level)" : prefix_; }
    [[noreturn]] void bad(const char* k, const char* what) const {
        throw ConfigError("config field \"" + prefix_ + k + "\" must be " + what);
    }
    const nlohmann::json* j_;
    std::string prefix_;
    mutable std::set<std::string> used_;
};

} // namespace sharplab

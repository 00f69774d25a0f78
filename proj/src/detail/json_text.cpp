#include "detail/json_text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace svmpc::detail {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string scalar(const OJson& j, bool exact) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) return "null";
        if (exact) return format_double(v);
    }
    return j.dump();
}

void emit(const OJson& j, int indent, bool exact, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
    const bool flat = j.is_array() &&
                      std::none_of(j.begin(), j.end(), [](const OJson& e) { return e.is_structured(); });
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        bool first = true;
        for (const auto& item : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += inner + OJson(item.key()).dump() + ": ";
            emit(item.value(), indent + 2, exact, out);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array() && !flat) {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i > 0) out += ",\n";
            out += inner;
            emit(j[i], indent + 2, exact, out);
        }
        out += "\n" + pad + "]";
    } else if (j.is_array()) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i > 0) out += ", ";
            out += scalar(j[i], exact);
        }
        out += "]";
    } else if (j.is_object()) {
        out += "{}";
    } else {
        out += scalar(j, exact);
    }
}

}  // namespace

std::string pretty_json(const OJson& j, bool exact_floats) {
    std::string out;
    emit(j, 0, exact_floats, out);
    out += "\n";
    return out;
}

}  // namespace svmpc::detail

#include "sglab/trace.hpp"

#include <cstdio>
#include <fstream>

namespace sglab {

namespace {
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void write_trace_csv(const EvolutionTrace& tr, const std::string& csv_path,
                     const std::string& meta_path) {
    std::ofstream out(csv_path);
    if (!out) throw ConfigError("cannot open '" + csv_path + "' for writing");
    out << "time,variance,entropy,fisher";
    for (std::size_t p = 0; p < tr.evaluation_points.size(); ++p)
        out << ",value_p" << p;
    out << "\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out << num(tr.times[i]) << "," << num(tr.variance[i]) << ","
            << num(tr.entropy[i]) << "," << num(tr.fisher[i]);
        for (double v : tr.values[i]) out << "," << num(v);
        out << "\n";
    }

    nlohmann::json meta = tr.meta;
    meta["method"] = tr.method;
    meta["field"] = tr.field;
    meta["potential"] = tr.potential;
    auto& pts = meta["evaluation_points"] = nlohmann::json::array();
    for (const Vec& x : tr.evaluation_points) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < x.size(); ++i) row.push_back(x[i]);
        pts.push_back(row);
    }
    if (!tr.value_se.empty()) {
        auto& se = meta["value_se"] = nlohmann::json::array();
        for (const auto& row : tr.value_se) se.push_back(row);
    }
    std::ofstream mo(meta_path);
    if (!mo) throw ConfigError("cannot open '" + meta_path + "' for writing");
    mo << meta.dump(2) << "\n";
}

} // namespace sglab

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "prefmono/dataset.hpp"  // format_double
#include "prefmono/errors.hpp"

#include "json.hpp"

namespace prefmono {

constexpr int kReportSchemaVersion = 1;

/// A rectangular table of report records with a fixed, ordered column set.
/// All report files are deterministic: field order is fixed, reals carry 17
/// significant digits, and all score quantities are dimensionless.
class RecordTable {
public:
    explicit RecordTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    void add_row(std::vector<std::string> row) {
        if (row.size() != columns_.size())
            throw InputError("record has " + std::to_string(row.size()) + " fields, expected " +
                             std::to_string(columns_.size()));
        rows_.push_back(std::move(row));
    }

    void write_csv(std::ostream& os) const {
        os << "# prefmono report, schema_version=" << kReportSchemaVersion
           << ", units: all score quantities dimensionless\n";
        for (std::size_t i = 0; i < columns_.size(); ++i)
            os << (i ? "," : "") << columns_[i];
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << '\n';
        }
    }

    void write_csv(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw Error("cannot open '" + path + "' for writing");
        write_csv(os);
    }

    void write_json(std::ostream& os) const {
        nlohmann::ordered_json j;
        j["schema_version"] = kReportSchemaVersion;
        j["records"] = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json rec;
            for (std::size_t i = 0; i < columns_.size(); ++i) rec[columns_[i]] = row[i];
            j["records"].push_back(std::move(rec));
        }
        os << j.dump(2) << '\n';
    }

    void write_json(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw Error("cannot open '" + path + "' for writing");
        write_json(os);
    }

    static RecordTable read_csv(std::istream& is) {
        std::string line;
        // comment lines precede the header
        do {
            if (!std::getline(is, line)) throw InputError("report file: missing header");
        } while (!line.empty() && line[0] == '#');
        RecordTable t(split(line));
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            t.add_row(split(line));
        }
        return t;
    }

    static RecordTable read_csv(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw Error("cannot open report file '" + path + "'");
        return read_csv(is);
    }

    bool operator==(const RecordTable& o) const {
        return columns_ == o.columns_ && rows_ == o.rows_;
    }

private:
    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
        if (!line.empty() && line.back() == ',') out.emplace_back();
        return out;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace prefmono

// report.hpp - bit-stable emission: CSV tables (RFC 4180, CRLF, header row,
// 17 significant digits) and JSON conversions of the result types.

#pragma once

#include "ebb/averaging.hpp"
#include "ebb/blackbox.hpp"
#include "ebb/boundary.hpp"
#include "ebb/certify.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ebb {

// %.17g; non-finite values as "nan", "inf", "-inf".
std::string format_double(double x);
std::string format_bool(bool b);
std::string format_opt(const std::optional<double>& x);  // empty when absent

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> fields);  // must match the header width
    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;

    static std::string quote(const std::string& field);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

nlohmann::json to_json(Complex z);  // [re, im]
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ExceptionalSets& s);
nlohmann::json to_json(const BoundaryRecord& r, bool with_trace = false);
nlohmann::json to_json(const EnergyClassification& c);
nlohmann::json to_json(const AbsContinuityReport& r);
nlohmann::json to_json(const CertificatePoint& p);
nlohmann::json to_json(const Certificate& c);

}  // namespace ebb

#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mfsir/csv.hpp"
#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"

// Loader for the MULAN dataset format: an ARFF file holding all columns and
// an XML file naming which attributes are labels. Supported ARFF subset:
// @relation, @attribute <name> numeric|real|integer|{v1,...}, @data, dense
// CSV rows and sparse "{idx value, ...}" rows, '%' comments, optionally
// quoted names and values. Missing values ('?') are rejected.

namespace mfsir {
namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                          (s.front() == '"' && s.back() == '"')))
        return s.substr(1, s.size() - 2);
    return s;
}

// Splits on `sep` outside quotes; keeps quoted text intact.
inline std::vector<std::string> split_quoted(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    char quote = '\0';
    for (char c : line) {
        if (quote != '\0') {
            cur += c;
            if (c == quote) quote = '\0';
        } else if (c == '\'' || c == '"') {
            cur += c;
            quote = c;
        } else if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_number(const std::string& raw, const std::string& context) {
    const std::string s = unquote(trim(raw));
    if (s == "?") throw data_error(context + ": missing value ('?') is not supported");
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw data_error(context + ": cannot parse numeric value '" + raw + "'");
    }
    if (pos != s.size())
        throw data_error(context + ": cannot parse numeric value '" + raw + "'");
    return v;
}

struct ArffAttribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;  // nominal categories, declaration order

    int value_index(const std::string& v) const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] == v) return static_cast<int>(i);
        return -1;
    }
};

struct ArffFile {
    std::string relation;
    std::vector<ArffAttribute> attributes;
    // one row per instance, one cell per declared attribute (raw strings)
    std::vector<std::vector<std::string>> rows;
};

inline ArffAttribute parse_attribute_decl(const std::string& rest, int lineno) {
    const std::string where = "arff line " + std::to_string(lineno);
    std::string body = trim(rest);
    if (body.empty()) throw data_error(where + ": empty @attribute declaration");

    ArffAttribute attr;
    std::size_t pos = 0;
    if (body[0] == '\'' || body[0] == '"') {
        char q = body[0];
        std::size_t end = body.find(q, 1);
        if (end == std::string::npos)
            throw data_error(where + ": unterminated quoted attribute name");
        attr.name = body.substr(1, end - 1);
        pos = end + 1;
    } else {
        std::size_t end = body.find_first_of(" \t");
        if (end == std::string::npos)
            throw data_error(where + ": attribute declaration lacks a type");
        attr.name = body.substr(0, end);
        pos = end;
    }
    std::string type = trim(body.substr(pos));
    if (type.empty()) throw data_error(where + ": attribute declaration lacks a type");

    if (type[0] == '{') {
        if (type.back() != '}')
            throw data_error(where + ": unterminated nominal value list");
        attr.nominal = true;
        for (auto& v : split_quoted(type.substr(1, type.size() - 2), ','))
            attr.values.push_back(unquote(v));
        if (attr.values.empty())
            throw data_error(where + ": nominal attribute with no values");
    } else {
        const std::string t = lower(type);
        if (t != "numeric" && t != "real" && t != "integer")
            throw data_error(where + ": unsupported attribute type '" + type + "'");
    }
    return attr;
}

inline ArffFile parse_arff(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open arff file: " + path);

    ArffFile file;
    std::string line;
    bool in_data = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;

        if (!in_data) {
            const std::string low = lower(t);
            if (low.rfind("@relation", 0) == 0) {
                file.relation = unquote(trim(t.substr(9)));
            } else if (low.rfind("@attribute", 0) == 0) {
                file.attributes.push_back(parse_attribute_decl(t.substr(10), lineno));
            } else if (low.rfind("@data", 0) == 0) {
                if (file.attributes.empty())
                    throw data_error("arff file declares no attributes before @data");
                in_data = true;
            } else {
                throw data_error("arff line " + std::to_string(lineno) +
                                 ": unrecognized header line '" + t + "'");
            }
            continue;
        }

        const auto ncols = file.attributes.size();
        std::vector<std::string> row(ncols);
        if (t[0] == '{') {
            // sparse row: unmentioned columns take the implicit default
            // (0 for numeric, first category for nominal)
            if (t.back() != '}')
                throw data_error("arff line " + std::to_string(lineno) + ": unterminated sparse row");
            for (std::size_t c = 0; c < ncols; ++c)
                row[c] = file.attributes[c].nominal ? file.attributes[c].values[0] : "0";
            const std::string body = trim(t.substr(1, t.size() - 2));
            if (!body.empty()) {
                for (auto& entry : split_quoted(body, ',')) {
                    std::istringstream es(entry);
                    long idx = -1;
                    std::string value;
                    es >> idx;
                    if (!es) throw data_error("arff line " + std::to_string(lineno) +
                                              ": malformed sparse entry '" + entry + "'");
                    std::getline(es, value);
                    value = trim(value);
                    if (value.empty()) throw data_error("arff line " + std::to_string(lineno) +
                                                        ": sparse entry lacks a value");
                    if (idx < 0 || idx >= static_cast<long>(ncols))
                        throw data_error("arff line " + std::to_string(lineno) +
                                         ": sparse index " + std::to_string(idx) + " out of range");
                    row[static_cast<std::size_t>(idx)] = unquote(value);
                }
            }
        } else {
            auto cells = split_quoted(t, ',');
            if (cells.size() != ncols)
                throw data_error("arff line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(ncols) + " values, got " +
                                 std::to_string(cells.size()));
            for (std::size_t c = 0; c < ncols; ++c) row[c] = unquote(cells[c]);
        }
        file.rows.push_back(std::move(row));
    }
    if (!in_data) throw data_error("arff file has no @data section: " + path);
    return file;
}

// MULAN label list: every <label name="..."> element, document order.
inline std::vector<std::string> parse_label_xml(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open labels xml file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string xml = buf.str();

    std::vector<std::string> labels;
    std::size_t pos = 0;
    while ((pos = xml.find("<label", pos)) != std::string::npos) {
        std::size_t close = xml.find('>', pos);
        if (close == std::string::npos) break;
        const std::string tag = xml.substr(pos, close - pos);
        std::size_t n = tag.find("name");
        if (n != std::string::npos) {
            std::size_t eq = tag.find('=', n);
            if (eq != std::string::npos) {
                std::size_t q1 = tag.find_first_of("\"'", eq);
                if (q1 != std::string::npos) {
                    char q = tag[q1];
                    std::size_t q2 = tag.find(q, q1 + 1);
                    if (q2 != std::string::npos)
                        labels.push_back(tag.substr(q1 + 1, q2 - q1 - 1));
                }
            }
        }
        pos = close + 1;
    }
    if (labels.empty())
        throw data_error("labels xml lists no <label name=...> elements: " + path);
    return labels;
}

}  // namespace detail

inline MultiLabelDataset load_dataset(const std::string& arff_path,
                                      const std::string& labels_xml_path) {
    const detail::ArffFile file = detail::parse_arff(arff_path);
    const std::vector<std::string> label_list = detail::parse_label_xml(labels_xml_path);

    std::set<std::string> label_set(label_list.begin(), label_list.end());
    for (const auto& name : label_list) {
        bool found = false;
        for (const auto& a : file.attributes) found = found || a.name == name;
        if (!found)
            throw data_error("label '" + name + "' from xml is not declared in the arff file");
    }
    if (file.rows.empty()) throw data_error("arff file has no data rows: " + arff_path);

    // column plan: label columns in arff order; remaining columns become
    // features, nominal ones expanded one-hot
    struct FeatCol {
        std::size_t attr;
        int category;  // -1 for numeric
        std::string name;
    };
    std::vector<FeatCol> feat_cols;
    std::vector<std::size_t> label_attrs;
    for (std::size_t a = 0; a < file.attributes.size(); ++a) {
        const auto& attr = file.attributes[a];
        if (label_set.count(attr.name)) {
            label_attrs.push_back(a);
        } else if (attr.nominal) {
            for (std::size_t v = 0; v < attr.values.size(); ++v)
                feat_cols.push_back({a, static_cast<int>(v), attr.name + "=" + attr.values[v]});
        } else {
            feat_cols.push_back({a, -1, attr.name});
        }
    }
    if (feat_cols.empty())
        throw data_error("arff file has no feature columns once labels are removed");

    MultiLabelDataset d;
    d.name = file.relation.empty() ? arff_path : file.relation;
    const auto n = static_cast<Eigen::Index>(file.rows.size());
    d.X.resize(n, static_cast<Eigen::Index>(feat_cols.size()));
    d.Y.resize(n, static_cast<Eigen::Index>(label_attrs.size()));
    for (const auto& fc : feat_cols) d.feature_names.push_back(fc.name);
    for (auto a : label_attrs) d.label_names.push_back(file.attributes[a].name);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = file.rows[static_cast<std::size_t>(i)];
        const std::string where = "arff data row " + std::to_string(i + 1);
        for (std::size_t c = 0; c < feat_cols.size(); ++c) {
            const auto& fc = feat_cols[c];
            const std::string& cell = row[fc.attr];
            if (fc.category >= 0) {
                if (cell == "?") throw data_error(where + ": missing value ('?') is not supported");
                int vi = file.attributes[fc.attr].value_index(cell);
                if (vi < 0)
                    throw data_error(where + ": value '" + cell + "' not in nominal domain of '" +
                                     file.attributes[fc.attr].name + "'");
                d.X(i, static_cast<Eigen::Index>(c)) = vi == fc.category ? 1.0 : 0.0;
            } else {
                d.X(i, static_cast<Eigen::Index>(c)) = detail::parse_number(cell, where);
            }
        }
        for (std::size_t c = 0; c < label_attrs.size(); ++c) {
            const std::string& cell = row[label_attrs[c]];
            if (cell == "0") {
                d.Y(i, static_cast<Eigen::Index>(c)) = 0.0;
            } else if (cell == "1") {
                d.Y(i, static_cast<Eigen::Index>(c)) = 1.0;
            } else {
                throw data_error(where + ": label '" + file.attributes[label_attrs[c]].name +
                                 "' has non-binary value '" + cell + "'");
            }
        }
    }
    validate(d);
    return d;
}

/// Writes a dense ARFF file; labels are declared as nominal {0,1} after the
/// numeric feature columns, matching the usual MULAN layout.
inline void write_arff(const MultiLabelDataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path);
    out << "@relation '" << d.name << "'\n\n";
    for (const auto& f : d.feature_names) out << "@attribute '" << f << "' numeric\n";
    for (const auto& l : d.label_names) out << "@attribute '" << l << "' {0,1}\n";
    out << "\n@data\n";
    for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.X.cols(); ++j)
            out << (j ? "," : "") << csv::fmt(d.X(i, j));
        for (Eigen::Index j = 0; j < d.Y.cols(); ++j)
            out << "," << (d.Y(i, j) != 0.0 ? 1 : 0);
        out << "\n";
    }
}

inline void write_label_xml(const MultiLabelDataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path);
    out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
    out << "<labels xmlns=\"http://mulan.sourceforge.net/labels\">\n";
    for (const auto& l : d.label_names) out << "  <label name=\"" << l << "\"></label>\n";
    out << "</labels>\n";
}

}  // namespace mfsir

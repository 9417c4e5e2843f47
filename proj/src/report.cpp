#include "frontlab/report.hpp"

#include "frontlab/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace frontlab {

std::string JsonWriter::format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void JsonWriter::comma() {
    if (!first_.empty()) {
        if (!first_.back()) out_ += ",";
        first_.back() = false;
    }
}

void JsonWriter::key(const std::string& k) {
    comma();
    if (!k.empty()) out_ += "\"" + k + "\":";
}

JsonWriter& JsonWriter::begin_object() {
    if (!first_.empty() && out_.size() && (out_.back() == '}' || out_.back() == ']')) comma();
    out_ += "{";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& k) {
    key(k);
    out_ += "[";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, double v) {
    key(k);
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, long v) {
    key(k);
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, bool v) {
    key(k);
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::string& v) {
    key(k);
    out_ += "\"" + v + "\"";
    return *this;
}

JsonWriter& JsonWriter::field(const std::string& k, const std::vector<double>& v) {
    begin_array(k);
    for (double x : v) element(x);
    return end_array();
}

JsonWriter& JsonWriter::element(double v) {
    comma();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::element(const std::string& v) {
    comma();
    out_ += "\"" + v + "\"";
    return *this;
}

JsonWriter& JsonWriter::raw_element_object() {
    comma();
    out_ += "{";
    first_.push_back(true);
    return *this;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ += (i ? "," : "") + header[i];
    out_ += "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != cols_) throw Error("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ += (i ? "," : "") + JsonWriter::format_double(values[i]);
    out_ += "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    if (values.size() != cols_) throw Error("csv row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ += (i ? "," : "") + values[i];
    out_ += "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write file: " + path);
    f << content;
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create directory: " + path);
}

std::string Manifest::to_json() const {
    JsonWriter j;
    j.begin_object();
    j.field("command", command);
    j.field("config", config_path);
    j.field("seed", seed);
    j.begin_array("files");
    for (const auto& f : files) j.element(f);
    j.end_array();
    j.end_object();
    return j.str() + "\n";
}

} // namespace frontlab

#pragma once

#include <string>
#include <vector>

namespace frontlab {

// Insertion-ordered JSON writer; doubles print with 17 significant digits so
// identical runs produce byte-identical reports.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array(const std::string& key = "");
    JsonWriter& end_array();
    JsonWriter& field(const std::string& key, double v);
    JsonWriter& field(const std::string& key, long v);
    JsonWriter& field(const std::string& key, int v) { return field(key, static_cast<long>(v)); }
    JsonWriter& field(const std::string& key, bool v);
    JsonWriter& field(const std::string& key, const std::string& v);
    JsonWriter& field(const std::string& key, const char* v) { return field(key, std::string(v)); }
    JsonWriter& field(const std::string& key, const std::vector<double>& v);
    JsonWriter& element(double v);
    JsonWriter& element(const std::string& v);
    JsonWriter& raw_element_object();  // begin_object inside an array
    std::string str() const { return out_; }

    static std::string format_double(double v);

private:
    void comma();
    void key(const std::string& k);
    std::string out_;
    std::vector<bool> first_;  // per nesting level
};

// CSV with header row, comma separation, LF endings; numbers at 17 digits.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    const std::string& str() const { return out_; }

private:
    std::string out_;
    std::size_t cols_ = 0;
};

void write_text_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);

// Run directory manifest: command, config echo, produced files.
struct Manifest {
    std::string command;
    std::string config_path;
    long seed = 0;
    std::vector<std::string> files;
    std::string to_json() const;
};

} // namespace frontlab

#pragma once
// CSV emission with '#' metadata comments and a fixed float format, so
// repeated runs produce byte-identical files.

#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace tomo {

inline std::string csv_fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

inline std::string csv_fmt(int v) { return std::to_string(v); }

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
        if (!f_) throw std::runtime_error("cannot open for writing: " + path);
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void comment(const std::string& line) { put("# " + line + "\n"); }

    void header(std::initializer_list<const char*> cols) {
        std::string s;
        for (const char* c : cols) {
            if (!s.empty()) s += ',';
            s += c;
        }
        put(s + "\n");
    }

    void row(const std::vector<std::string>& fields) {
        std::string s;
        for (const auto& f : fields) {
            if (!s.empty()) s += ',';
            s += f;
        }
        put(s + "\n");
    }

  private:
    void put(const std::string& s) {
        if (std::fwrite(s.data(), 1, s.size(), f_) != s.size())
            throw std::runtime_error("short write");
    }
    std::FILE* f_;
};

}  // namespace tomo

#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace ckn {

// Minimal JSON writer with deterministic output: floats always print with 17
// significant digits, fields appear exactly in insertion order.
class JsonWriter {
public:
    void begin_object() {
        sep();
        out_ += '{';
        first_ = true;
    }
    void end_object() {
        out_ += '}';
        first_ = false;
    }
    void begin_array() {
        sep();
        out_ += '[';
        first_ = true;
    }
    void end_array() {
        out_ += ']';
        first_ = false;
    }

    void key(const std::string& k) {
        sep();
        append_string(k);
        out_ += ':';
        first_ = true;  // suppress the comma before the value
    }

    void value(double v) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out_ += buf;
    }
    void value(int v) {
        sep();
        out_ += std::to_string(v);
    }
    void value(long long v) {
        sep();
        out_ += std::to_string(v);
    }
    void value(unsigned long long v) {
        sep();
        out_ += std::to_string(v);
    }
    void value(bool v) {
        sep();
        out_ += v ? "true" : "false";
    }
    void value(const std::string& v) {
        sep();
        append_string(v);
    }
    void value(const char* v) { value(std::string(v)); }

    template <class T>
    void field(const std::string& k, const T& v) {
        key(k);
        value(v);
    }
    void field(const std::string& k, const std::vector<double>& v) {
        key(k);
        begin_array();
        for (double x : v) value(x);
        end_array();
    }

    const std::string& str() const { return out_; }

private:
    void sep() {
        if (!first_) out_ += ',';
        first_ = false;
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                default: out_ += c;
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool first_ = true;
};

}  // namespace ckn

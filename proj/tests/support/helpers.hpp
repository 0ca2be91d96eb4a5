#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "synthbench/schema.hpp"

namespace helpers {

// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        dir_ = std::filesystem::temp_directory_path() /
               ("synthbench_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// The five example records from the source dataset documentation.
inline std::string table1_csv() {
    return "Gender,RaceEthnicity,ParentalEducation,Lunch,TestPrep,Math,Reading,Writing,Science,TotalScore\n"
           "Male,B,High School,1,0,65,100,67,96,328\n"
           "Male,C,Master's,0,0,10,99,97,58,264\n"
           "Male,D,Some College,1,1,22,51,41,84,198\n"
           "Female,A,Associate's,0,0,87,66,76,61,290\n"
           "Female,C,Associate's,1,0,62,36,79,63,240\n";
}

// Single-continuous-column schema for small metric fixtures.
inline synthbench::Schema one_col_schema(double lo, double hi) {
    synthbench::Schema s;
    s.columns = {
        {"label", synthbench::CategoricalKind{{"x", "y"}}},
        {"value", synthbench::ContinuousKind{lo, hi, false}},
    };
    s.class_target = "label";
    s.regression_target = "value";
    return s;
}

inline synthbench::Table one_col_table(const std::vector<double>& values, double lo, double hi) {
    synthbench::Table t(one_col_schema(lo, hi));
    t.resize_rows(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        t.cat(0)[i] = 0;
        t.cont(1)[i] = values[i];
    }
    return t;
}

}  // namespace helpers

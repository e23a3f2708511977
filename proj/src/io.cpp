#include "fvlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fvlab/errors.hpp"

namespace fvlab {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    size_t n_columns = 0;
    std::string path;
};

CsvWriter::CsvWriter(const std::string& path, uint64_t seed, uint64_t config_hash,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        throw FvError("cannot open output file: " + path);
    }
    impl_->path = path;
    impl_->n_columns = columns.size();
    char head[128];
    std::snprintf(head, sizeof(head), "# fvlab schema=1 seed=%llu config=%016llx\n",
                  static_cast<unsigned long long>(seed),
                  static_cast<unsigned long long>(config_hash));
    impl_->out << head;
    for (size_t i = 0; i < columns.size(); ++i)
        impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    close();
    delete impl_;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != impl_->n_columns)
        throw FvError("csv row width mismatch in " + impl_->path);
    for (size_t i = 0; i < cells.size(); ++i)
        impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::close() {
    if (impl_->out.is_open()) impl_->out.close();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FvError("cannot open output file: " + path);
    out << content;
}

}  // namespace fvlab

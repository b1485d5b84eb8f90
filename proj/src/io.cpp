// Copyright 2026 The Phireg Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phireg/io.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace phireg {

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::invalid_argument("cannot open output file: " + path);
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::Comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::Header(const std::vector<std::string>& columns) {
  Row(columns);
}

void CsvWriter::Row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

void WriteTrajectoryCsv(const Trajectory& traj, const std::string& path,
                        const std::vector<std::string>& comments) {
  CsvWriter csv(path);
  for (const auto& c : comments) csv.Comment(c);
  std::vector<std::string> header = {"t"};
  for (int i = 0; i < traj.num_row_actions(); ++i) {
    header.push_back("x" + std::to_string(i + 1));
  }
  for (int j = 0; j < traj.num_col_actions(); ++j) {
    header.push_back("y" + std::to_string(j + 1));
  }
  csv.Header(header);
  for (size_t s = 0; s < traj.num_samples(); ++s) {
    std::vector<std::string> row;
    row.reserve(header.size());
    row.push_back(FormatDouble(traj.time(s)));
    for (double v : traj.x(s)) row.push_back(FormatDouble(v));
    for (double v : traj.y(s)) row.push_back(FormatDouble(v));
    csv.Row(row);
  }
}

void EnsureDirectory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec && !std::filesystem::is_directory(path)) {
    throw std::invalid_argument("cannot create directory: " + path);
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace phireg

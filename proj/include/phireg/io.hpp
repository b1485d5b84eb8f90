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

#ifndef PHIREG_IO_HPP_
#define PHIREG_IO_HPP_

#include <fstream>
#include <string>
#include <vector>

#include "phireg/dynamics.hpp"

namespace phireg {

// 17-significant-digit decimal form (%.17g): round-trips the double and is
// deterministic across runs of one build.
std::string FormatDouble(double v);

// Column-oriented CSV writer. Lines starting with '#' carry the echoed
// configuration so every output is self-describing.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();

  void Comment(const std::string& text);
  void Header(const std::vector<std::string>& columns);
  void Row(const std::vector<std::string>& cells);

  // Convenience for mixed string/double rows.
  class RowBuilder {
   public:
    explicit RowBuilder(CsvWriter* w) : writer_(w) {}
    RowBuilder& Str(const std::string& s) {
      cells_.push_back(s);
      return *this;
    }
    RowBuilder& Num(double v) {
      cells_.push_back(FormatDouble(v));
      return *this;
    }
    RowBuilder& Int(long long v) {
      cells_.push_back(std::to_string(v));
      return *this;
    }
    void Done() { writer_->Row(cells_); }

   private:
    CsvWriter* writer_;
    std::vector<std::string> cells_;
  };
  RowBuilder NewRow() { return RowBuilder(this); }

 private:
  std::ofstream out_;
};

// Writes the sampled trajectory with header t,x1..xn,y1..ym. Any comment
// lines are emitted before the header.
void WriteTrajectoryCsv(const Trajectory& traj, const std::string& path,
                        const std::vector<std::string>& comments = {});

// Creates the directory (and parents) if missing; throws on failure.
void EnsureDirectory(const std::string& path);

// Whole-file read; throws when the file cannot be opened.
std::string ReadFile(const std::string& path);

}  // namespace phireg

#endif  // PHIREG_IO_HPP_

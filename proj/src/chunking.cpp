// Copyright 2026 The TacticScan Authors
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

#include "tacticscan/chunking.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace tacticscan {

WindowedSequence window(const TokenSequence& seq, std::size_t window_size) {
    if (window_size == 0) throw Error("window size must be positive");
    WindowedSequence out;
    const auto& t = seq.tokens;
    out.windows.reserve(window_count(t.size(), window_size));
    for (std::size_t start = 0; start < t.size(); start += window_size) {
        const auto end = std::min(t.size(), start + window_size);
        out.windows.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(start),
                                 t.begin() + static_cast<std::ptrdiff_t>(end));
    }
    if (out.windows.empty()) out.windows.emplace_back();
    return out;
}

std::vector<LengthStats> length_stats(std::span<const TacticDataset> datasets,
                                      const Preprocessor& preprocessor, std::size_t window_size) {
    std::vector<LengthStats> out;
    for (const auto& ds : datasets) {
        LengthStats row;
        row.tactic_id = ds.tactic_id;
        std::array<std::size_t, 4> at_most{};
        std::size_t total = 0;
        auto add = [&](const CodeSnippet& s) {
            const auto m = window_count(preprocessor(s.text).tokens.size(), window_size);
            row.max_windows = std::max(row.max_windows, m);
            for (std::size_t k = 0; k < at_most.size(); ++k)
                if (m <= k + 1) ++at_most[k];
            ++total;
        };
        for (const auto& s : ds.related) add(s);
        for (const auto& s : ds.unrelated) add(s);
        for (std::size_t k = 0; k < at_most.size(); ++k)
            row.cumulative_percent[k] =
                total == 0 ? 0.0 : 100.0 * static_cast<double>(at_most[k]) / static_cast<double>(total);
        out.push_back(std::move(row));
    }
    return out;
}

void write_length_stats_csv(std::ostream& out, std::span<const LengthStats> stats) {
    out << "tactic,S1,S2,S3,S4,SMax\n";
    char buf[32];
    for (const auto& row : stats) {
        out << row.tactic_id;
        for (double p : row.cumulative_percent) {
            std::snprintf(buf, sizeof buf, "%.2f", p);
            out << ',' << buf;
        }
        out << ',' << row.max_windows << '\n';
    }
}

}  // namespace tacticscan

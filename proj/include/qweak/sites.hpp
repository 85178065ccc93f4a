// Copyright 2026 The qweak Authors
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
#pragma once

#include "qweak/fields.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <tuple>
#include <vector>

namespace qweak {

/// One model evaluation: subdomain model `owner` at point `x`.
struct Site {
    int owner = 0;
    Coord x{0.0, 0.0};
    FieldNeeds needs;
};

/// Deduplicated registry of evaluation sites shared by all loss terms, so a
/// (model, point) pair is simulated once per epoch however many terms use it.
class SiteTable {
  public:
    std::size_t add(int owner, const Coord &x, FieldNeeds needs) {
        const Key key{owner, x[0], x[1]};
        auto it = index_.find(key);
        if (it != index_.end()) {
            sites_[it->second].needs |= needs;
            return it->second;
        }
        const std::size_t id = sites_.size();
        sites_.push_back({owner, x, needs});
        index_.emplace(key, id);
        return id;
    }

    [[nodiscard]] std::span<const Site> sites() const noexcept {
        return sites_;
    }
    [[nodiscard]] const Site &operator[](std::size_t i) const {
        return sites_[i];
    }
    [[nodiscard]] std::size_t size() const noexcept { return sites_.size(); }

  private:
    using Key = std::tuple<int, double, double>;
    std::vector<Site> sites_;
    std::map<Key, std::size_t> index_;
};

} // namespace qweak

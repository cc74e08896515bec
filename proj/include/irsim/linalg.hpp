// SPDX-License-Identifier: Apache-2.0
//
// irsim - phase-dependent reflecting-surface modelling and beamforming simulation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace irsim {

using cdouble = std::complex<double>;
using CVec = std::vector<cdouble>;

// Dense row-major complex matrix. Problem sizes here are tiny (N <= a few
// hundred), so a flat std::vector is all that is needed.
class CMat {
  public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cdouble &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cdouble &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<cdouble> &data() { return data_; }
    const std::vector<cdouble> &data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

inline double squared_norm(const CVec &x) {
    double s = 0.0;
    for (const auto &e : x)
        s += std::norm(e);
    return s;
}

} // namespace irsim

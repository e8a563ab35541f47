/*
   Copyright 2026 The mvlevy Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mvlevy::fft {

/// Complex buffer allocated with the FFT library's aligned allocator.
class Buffer {
public:
    explicit Buffer(std::size_t size);
    Buffer(Buffer &&) noexcept = default;
    Buffer &operator=(Buffer &&) noexcept = default;

    std::size_t size() const { return size_; }
    std::complex<double> *data() { return data_.get(); }
    const std::complex<double> *data() const { return data_.get(); }
    std::span<std::complex<double>> span() { return {data_.get(), size_}; }
    std::span<const std::complex<double>> span() const { return {data_.get(), size_}; }
    std::complex<double> &operator[](std::size_t i) { return data_[i]; }
    const std::complex<double> &operator[](std::size_t i) const { return data_[i]; }

private:
    struct Free {
        void operator()(std::complex<double> *p) const;
    };
    std::unique_ptr<std::complex<double>[], Free> data_;
    std::size_t size_;
};

/// In-place unnormalized transform X_k = Σ_j x_j e^{∓2πi jk/n} over a
/// row-major array with the given shape.  Plans are cached and shared; safe
/// to call concurrently.
void forward(Buffer &data, std::span<const std::size_t> shape);
void inverse(Buffer &data, std::span<const std::size_t> shape);

} // namespace mvlevy::fft

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

#include "mvlevy/fft.hpp"

#include "mvlevy/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace mvlevy::fft {

namespace {

std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

/// One plan per (shape, direction); executed on any suitably aligned buffer
/// through the new-array interface.
fftw_plan plan_for(std::span<const std::size_t> shape, int sign) {
    static std::map<std::tuple<std::vector<std::size_t>, int>, fftw_plan> plans;
    std::vector<std::size_t> key(shape.begin(), shape.end());
    std::lock_guard lock(planner_mutex());
    auto it = plans.find({key, sign});
    if (it != plans.end()) return it->second;
    std::vector<int> n(shape.begin(), shape.end());
    std::size_t total = 1;
    for (auto s : shape) total *= s;
    Buffer scratch(total);
    auto *p = reinterpret_cast<fftw_complex *>(scratch.data());
    fftw_plan plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), p, p, sign, FFTW_ESTIMATE);
    if (!plan) throw NumericalError("FFT planner failed");
    plans.emplace(std::make_tuple(std::move(key), sign), plan);
    return plan;
}

void run(Buffer &data, std::span<const std::size_t> shape, int sign) {
    std::size_t total = 1;
    for (auto s : shape) total *= s;
    if (total != data.size()) throw ArgumentError("FFT buffer does not match its shape");
    auto *p = reinterpret_cast<fftw_complex *>(data.data());
    fftw_execute_dft(plan_for(shape, sign), p, p);
}

} // namespace

void Buffer::Free::operator()(std::complex<double> *p) const { fftw_free(p); }

Buffer::Buffer(std::size_t size)
    : data_(static_cast<std::complex<double> *>(fftw_malloc(sizeof(std::complex<double>) * size))),
      size_(size) {
    if (!data_) throw std::bad_alloc();
}

void forward(Buffer &data, std::span<const std::size_t> shape) { run(data, shape, FFTW_FORWARD); }
void inverse(Buffer &data, std::span<const std::size_t> shape) { run(data, shape, FFTW_BACKWARD); }

} // namespace mvlevy::fft

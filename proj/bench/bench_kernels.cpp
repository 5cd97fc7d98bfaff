// Parallel kernels against their serial reference counterparts on a
// page-sized image (A4 at 150 dpi).

#include <benchmark/benchmark.h>

#include <random>

#include "dictscan/geometry.hpp"
#include "dictscan/imaging.hpp"

using namespace dictscan;

namespace {

constexpr int kWidth = 1240;
constexpr int kHeight = 1754;

const GrayImage& page() {
    static const GrayImage img = [] {
        GrayImage g(kWidth, kHeight);
        std::mt19937_64 rng(1);
        std::uniform_int_distribution<int> paper(215, 255), ink(0, 50);
        for (int y = 0; y < kHeight; ++y)
            for (int x = 0; x < kWidth; ++x) {
                const bool rule = y % 60 < 2 || x % 150 < 2;
                const bool glyph = (x / 7 + y / 11) % 9 == 0 && (x * 31 + y * 17) % 5 < 2;
                g.at(x, y) = static_cast<std::uint8_t>(rule || glyph ? ink(rng) : paper(rng));
            }
        return g;
    }();
    return img;
}

const BinaryImage& ink() {
    static const BinaryImage b = binarize(page(), otsu_threshold(compute_histogram(page())).threshold);
    return b;
}

const StructuringElement& row_element() {
    static const StructuringElement se(line_element_length(ink(), Orientation::horizontal, 40), 1);
    return se;
}

void set_pixels(benchmark::State& state) {
    state.SetItemsProcessed(state.iterations() * kWidth * kHeight);
}

void BM_Histogram(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(compute_histogram(page()));
    set_pixels(state);
}
void BM_HistogramReference(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(reference::compute_histogram(page()));
    set_pixels(state);
}

void BM_Binarize(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(binarize(page(), 128));
    set_pixels(state);
}
void BM_BinarizeReference(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(reference::binarize(page(), 128, Polarity::ink_is_dark));
    set_pixels(state);
}

void BM_Erode(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(erode(ink(), row_element()));
    set_pixels(state);
}
void BM_ErodeReference(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(reference::erode(ink(), row_element()));
    set_pixels(state);
}

void BM_Dilate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(dilate(ink(), row_element()));
    set_pixels(state);
}
void BM_DilateReference(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(reference::dilate(ink(), row_element()));
    set_pixels(state);
}

void BM_RotateGray(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(rotate(page(), 0.05));
    set_pixels(state);
}
void BM_RotateGrayReference(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(reference::rotate(page(), 0.05));
    set_pixels(state);
}

void BM_RotateBinary(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(rotate(ink(), 0.05, BinaryResample::any_neighbour));
    set_pixels(state);
}
void BM_RotateBinaryReference(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::rotate(ink(), 0.05, BinaryResample::any_neighbour));
    set_pixels(state);
}

}  // namespace

BENCHMARK(BM_Histogram)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HistogramReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Binarize)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BinarizeReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Erode)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ErodeReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Dilate)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DilateReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RotateGray)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RotateGrayReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RotateBinary)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RotateBinaryReference)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

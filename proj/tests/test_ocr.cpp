#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <mutex>

#include "dictscan/error.hpp"
#include "dictscan/ocr.hpp"
#include "synthetic.hpp"

using namespace dictscan;

namespace {

GrayImage filled(int w, int h, std::uint8_t v) {
    GrayImage img(w, h);
    for (auto& p : img.pixels()) p = v;
    return img;
}

std::filesystem::path write_script(const std::filesystem::path& dir, const std::string& name,
                                   const std::string& body) {
    const auto path = dir / name;
    std::ofstream(path) << "#!/bin/sh\n" << body;
    std::filesystem::permissions(path, std::filesystem::perms::owner_all);
    return path;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

// Records every request it sees; fails on regions whose top-left pixel is 7.
class RecordingBackend final : public OcrBackend {
public:
    std::string recognize(const OcrRequest& req, const OcrConfig&) const override {
        std::lock_guard lock(mu_);
        seen_.push_back(req.region);
        if (req.region.at(0, 0) == 7) throw BackendFailure("bad cell");
        return "cell" + std::to_string(req.region.at(req.region.width() / 2, req.region.height() / 2));
    }
    std::vector<GrayImage> seen() const {
        std::lock_guard lock(mu_);
        return seen_;
    }

private:
    mutable std::mutex mu_;
    mutable std::vector<GrayImage> seen_;
};

}  // namespace

TEST(OcrConfig, DefaultEngineArguments) {
    const OcrConfig cfg;
    EXPECT_EQ(cfg.engine_arguments(), (std::vector<std::string>{"-l", "vie+en", "--oem", "1", "--psm", "6"}));
    EXPECT_EQ(cfg.cell_margin_px, 2);
    EXPECT_DOUBLE_EQ(cfg.timeout_s, 30.0);
    EXPECT_GE(cfg.effective_parallelism(), 1);
}

TEST(OcrConfig, CustomEngineArguments) {
    OcrConfig cfg;
    cfg.languages = {"eng"};
    cfg.engine_mode = 3;
    cfg.segmentation_mode = 7;
    EXPECT_EQ(cfg.engine_arguments(), (std::vector<std::string>{"-l", "eng", "--oem", "3", "--psm", "7"}));
}

TEST(RegionHash, StableAndLayoutSensitive) {
    const GrayImage a = filled(4, 2, 9);
    EXPECT_EQ(region_hash(a), region_hash(filled(4, 2, 9)));
    EXPECT_EQ(region_hash(a).size(), 16u);
    EXPECT_NE(region_hash(a), region_hash(filled(2, 4, 9)));
    GrayImage b = a;
    b.at(3, 1) = 10;
    EXPECT_NE(region_hash(a), region_hash(b));
}

TEST(TrimTrailingWhitespace, Examples) {
    EXPECT_EQ(trim_trailing_whitespace("sŏk \n\f"), "sŏk");
    EXPECT_EQ(trim_trailing_whitespace("  a b"), "  a b");
    EXPECT_EQ(trim_trailing_whitespace("\n\n"), "");
}

TEST(MockBackend, EchoesFixture) {
    const GrayImage region = filled(10, 6, 200);
    const MockOcrBackend mock({{region_hash(region), "sŏk\n"}});
    EXPECT_EQ(mock.recognize({region}, {}), "sŏk");
    EXPECT_EQ(mock.recognize({region}, {}), mock.recognize({region}, {}));
}

TEST(MockBackend, UnknownRegionIsEmptyText) {
    EXPECT_EQ(MockOcrBackend().recognize({filled(5, 5, 255)}, {}), "");
}

TEST(MockBackend, NullFixtureFails) {
    const GrayImage region = filled(3, 3, 0);
    const MockOcrBackend mock({{region_hash(region), std::nullopt}});
    EXPECT_THROW(mock.recognize({region}, {}), BackendFailure);
}

TEST(MockBackend, EmptyRegionRejected) {
    EXPECT_THROW(MockOcrBackend().recognize({GrayImage()}, {}), std::invalid_argument);
}

TEST(MockBackend, LoadsFixtureFile) {
    dictscan::testing::TempDir dir("fixture");
    const GrayImage region = filled(2, 2, 1);
    std::ofstream(dir.path() / "f.json") << "{\"" << region_hash(region) << "\": \"pơđôr\", \"00\": null}";
    EXPECT_EQ(MockOcrBackend::load(dir.path() / "f.json").recognize({region}, {}), "pơđôr");
    std::ofstream(dir.path() / "bad.json") << "{\"a\": 3}";
    EXPECT_THROW(MockOcrBackend::load(dir.path() / "bad.json"), ParseError);
    std::ofstream(dir.path() / "broken.json") << "{\"a\": ";
    EXPECT_THROW(MockOcrBackend::load(dir.path() / "broken.json"), ParseError);
    EXPECT_THROW(MockOcrBackend::load(dir.path() / "missing.json"), InputError);
}

TEST(CellRegion, InsetAndClamp) {
    const Cell cell{{10, 20}, {50, 60}};
    EXPECT_EQ(cell_region(cell, 2, 100, 100), (Rect{12, 22, 37, 37}));
    EXPECT_EQ(cell_region(cell, 0, 100, 100), (Rect{10, 20, 41, 41}));
    EXPECT_EQ(cell_region(cell, 2, 40, 40), (Rect{12, 22, 28, 18}));
    EXPECT_TRUE(cell_region({{0, 0}, {3, 3}}, 2, 100, 100).empty());
}

TEST(RecognizeCells, OrderAndIsolation) {
    GrayImage page = filled(200, 100, 255);
    std::vector<Cell> cells;
    for (int k = 0; k < 4; ++k) {
        const int x0 = k * 50;
        cells.push_back({{double(x0), 0}, {double(x0 + 49), 99}, 0, k});
        for (int y = 10; y < 90; ++y)
            for (int x = x0 + 10; x < x0 + 40; ++x) page.at(x, y) = static_cast<std::uint8_t>(100 + k);
    }
    page.at(2 * 50 + 2, 2) = 7;  // third cell fails
    const RecordingBackend backend;
    OcrConfig cfg;
    cfg.parallelism = 3;
    const auto out = recognize_cells(page, cells, backend, cfg);
    ASSERT_EQ(out.size(), 4u);
    for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(out[k].cell, cells[k]);
        if (k == 2) {
            EXPECT_TRUE(out[k].error);
            EXPECT_EQ(out[k].text, "");
        } else {
            EXPECT_FALSE(out[k].error);
            EXPECT_EQ(out[k].text, "cell" + std::to_string(100 + k));
        }
    }
}

TEST(RecognizeCells, MarginExcludesBorderInk) {
    GrayImage page = filled(120, 80, 255);
    const Cell cell{{20, 10}, {100, 70}};
    // Rule lines 3 px wide centred on the cell border.
    for (int x = 0; x < 120; ++x)
        for (int d = -1; d <= 1; ++d) page.at(x, 10 + d) = page.at(x, 70 + d) = 0;
    for (int y = 0; y < 80; ++y)
        for (int d = -1; d <= 1; ++d) page.at(20 + d, y) = page.at(100 + d, y) = 0;
    const RecordingBackend backend;
    const std::vector<Cell> cells{cell};
    recognize_cells(page, cells, backend, {});
    const auto seen = backend.seen();
    ASSERT_EQ(seen.size(), 1u);
    for (auto p : seen[0].pixels()) EXPECT_EQ(p, 255);
    EXPECT_EQ(seen[0].width(), 77);
    EXPECT_EQ(seen[0].height(), 57);
}

TEST(RecognizeCells, EmptyInput) {
    EXPECT_TRUE(recognize_cells(filled(10, 10, 255), {}, MockOcrBackend(), {}).empty());
}

TEST(ExternalBackend, PassesConfiguredArguments) {
    dictscan::testing::TempDir dir("shim");
    const auto log = dir.path() / "argv.txt";
    OcrConfig cfg;
    cfg.command = write_script(dir.path(), "engine",
                               "for a in \"$@\"; do echo \"$a\" >> '" + log.string() + "'; done\n"
                               "test -s \"$1\" || exit 3\n"
                               "printf 'sŏk kơ\\n\\n'\n")
                      .string();
    EXPECT_EQ(ExternalOcrBackend().recognize({filled(8, 8, 128)}, cfg), "sŏk kơ");
    std::vector<std::string> args;
    std::istringstream lines(slurp(log));
    for (std::string line; std::getline(lines, line);) args.push_back(line);
    ASSERT_EQ(args.size(), 8u);
    EXPECT_EQ(std::filesystem::path(args[0]).extension(), ".png");
    EXPECT_EQ(args[1], "stdout");
    EXPECT_EQ(std::vector<std::string>(args.begin() + 2, args.end()),
              (std::vector<std::string>{"-l", "vie+en", "--oem", "1", "--psm", "6"}));
    EXPECT_FALSE(std::filesystem::exists(args[0]));
}

TEST(ExternalBackend, NonZeroExitIsFailureWithDiagnostics) {
    dictscan::testing::TempDir dir("shim");
    OcrConfig cfg;
    cfg.command = write_script(dir.path(), "engine", "echo 'bad language' >&2\nexit 1\n").string();
    try {
        ExternalOcrBackend().recognize({filled(4, 4, 0)}, cfg);
        FAIL();
    } catch (const BackendFailure& e) {
        EXPECT_NE(std::string(e.what()).find("bad language"), std::string::npos);
    }
}

TEST(ExternalBackend, MissingBinaryIsUnavailable) {
    OcrConfig cfg;
    cfg.command = "/nonexistent/dir/tesseract-missing";
    EXPECT_THROW(ExternalOcrBackend().recognize({filled(4, 4, 0)}, cfg), BackendUnavailable);
    cfg.command = "definitely-not-an-ocr-engine-on-path";
    EXPECT_THROW(ExternalOcrBackend().recognize({filled(4, 4, 0)}, cfg), BackendUnavailable);
}

TEST(ExternalBackend, TimeoutKillsEngine) {
    dictscan::testing::TempDir dir("shim");
    OcrConfig cfg;
    cfg.command = write_script(dir.path(), "engine", "exec sleep 30\n").string();
    cfg.timeout_s = 0.3;
    const auto start = std::chrono::steady_clock::now();
    EXPECT_THROW(ExternalOcrBackend().recognize({filled(4, 4, 0)}, cfg), BackendTimeout);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}
